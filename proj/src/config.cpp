#include "ecfm/config.hpp"

#include <stdexcept>

namespace ecfm {

using ojson = nlohmann::ordered_json;

const char* to_string(Mode mode) {
  return mode == Mode::Ecfm ? "ecfm" : "ecfm_minus";
}

Mode mode_from_string(const std::string& s) {
  if (s == "ecfm") return Mode::Ecfm;
  if (s == "ecfm_minus" || s == "ecfm-minus") return Mode::EcfmMinus;
  throw std::invalid_argument("unknown mode \"" + s + "\"");
}

void PipelineConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0,1]");
  }
  if (updates < 1) throw std::invalid_argument("updates must be >= 1");
  if (!(learning_rate >= 0.0)) {
    throw std::invalid_argument("learning rate must be >= 0");
  }
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(lambda_l >= 0.0 && lambda_s >= 0.0)) {
    throw std::invalid_argument("lambda weights must be >= 0");
  }
  kalman.validate();
}

ojson PipelineConfig::to_json() const {
  ojson j;
  j["alpha"] = alpha;
  j["updates"] = updates;
  j["mode"] = std::string(to_string(mode));
  j["learning_rate"] = learning_rate;
  j["batch_size"] = batch_size;
  j["seed"] = seed;
  j["characterizer"] = std::string(to_string(characterizer));
  j["selector_order"] = std::string(to_string(selector_order));
  j["kalman"] = ojson{{"q", kalman.q},
                      {"r", kalman.r},
                      {"b", kalman.b},
                      {"p0", kalman.p0},
                      {"c0", kalman.c0}};
  j["lambda_l"] = lambda_l;
  j["lambda_s"] = lambda_s;
  j["tau"] = tau;
  return j;
}

PipelineConfig PipelineConfig::from_json(const ojson& j) {
  PipelineConfig c;
  c.alpha = j.at("alpha").get<double>();
  c.updates = j.at("updates").get<int>();
  c.mode = mode_from_string(j.at("mode").get<std::string>());
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.characterizer =
      characterizer_kind_from_string(j.at("characterizer").get<std::string>());
  c.selector_order =
      selector_order_from_string(j.at("selector_order").get<std::string>());
  const ojson& k = j.at("kalman");
  c.kalman.q = k.at("q").get<double>();
  c.kalman.r = k.at("r").get<double>();
  c.kalman.b = k.at("b").get<double>();
  c.kalman.p0 = k.at("p0").get<double>();
  c.kalman.c0 = k.at("c0").get<double>();
  c.lambda_l = j.at("lambda_l").get<double>();
  c.lambda_s = j.at("lambda_s").get<double>();
  c.tau = j.at("tau").get<double>();
  return c;
}

}  // namespace ecfm
