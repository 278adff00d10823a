#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "ecfm/characterizer.hpp"
#include "ecfm/kalman.hpp"
#include "ecfm/selector.hpp"

namespace ecfm {

enum class Mode { Ecfm, EcfmMinus };
const char* to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct PipelineConfig {
  double alpha = 0.6;
  int updates = 50;
  Mode mode = Mode::Ecfm;
  double learning_rate = 1e-2;
  int batch_size = 32;
  std::uint64_t seed = 0;
  CharacterizerKind characterizer = CharacterizerKind::TextCnn;
  SelectorOrder selector_order = SelectorOrder::Largest;
  KalmanParams kalman;
  double lambda_l = 1.0;
  double lambda_s = 1.0;
  double tau = 0.5;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static PipelineConfig from_json(const nlohmann::ordered_json& j);

  bool operator==(const PipelineConfig&) const = default;
};

}  // namespace ecfm
