#include "ecfm/report.hpp"

#include <fstream>
#include <stdexcept>

namespace ecfm {

using ojson = nlohmann::ordered_json;

ojson epoch_log_to_json(const EpochLog& log) {
  ojson j;
  j["t"] = log.t;
  j["positive_fraction"] = log.positive_fraction;
  j["dt"] = log.dt;
  j["selected_count"] = log.selected_count;
  j["labeled_loss"] = log.labeled_loss;
  j["pseudo_loss"] = log.pseudo_loss;
  j["event_cred_digest"] = log.event_cred_digest;
  return j;
}

EpochLog epoch_log_from_json(const ojson& j) {
  EpochLog log;
  log.t = j.at("t").get<int>();
  log.positive_fraction = j.at("positive_fraction").get<double>();
  log.dt = j.at("dt").get<double>();
  log.selected_count = j.at("selected_count").get<int>();
  log.labeled_loss = j.at("labeled_loss").get<double>();
  log.pseudo_loss = j.at("pseudo_loss").get<double>();
  log.event_cred_digest = j.at("event_cred_digest").get<std::string>();
  return log;
}

namespace {

ojson metrics_to_json(const Metrics& m) {
  ojson j;
  j["accuracy"] = m.accuracy;
  j["auc_roc"] = m.auc_roc;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["zero_denominator_precision"] = m.zero_denominator_precision;
  j["zero_denominator_recall"] = m.zero_denominator_recall;
  j["degenerate_auc"] = m.degenerate_auc;
  return j;
}

Metrics metrics_from_json(const ojson& j) {
  Metrics m;
  m.accuracy = j.at("accuracy").get<double>();
  m.auc_roc = j.at("auc_roc").get<double>();
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.zero_denominator_precision = j.at("zero_denominator_precision").get<bool>();
  m.zero_denominator_recall = j.at("zero_denominator_recall").get<bool>();
  m.degenerate_auc = j.at("degenerate_auc").get<bool>();
  return m;
}

}  // namespace

ojson RunReport::to_json() const {
  ojson j;
  j["version"] = 1;
  j["seed"] = config.seed;
  j["config"] = config.to_json();
  j["metrics"] = metrics_to_json(metrics);
  ojson logs = ojson::array();
  for (const EpochLog& log : epoch_logs) logs.push_back(epoch_log_to_json(log));
  j["epoch_logs"] = std::move(logs);
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

RunReport RunReport::from_json(const ojson& j) {
  if (!j.contains("version") || j.at("version").get<int>() != 1) {
    throw std::runtime_error("unsupported report version");
  }
  RunReport r;
  r.config = PipelineConfig::from_json(j.at("config"));
  r.metrics = metrics_from_json(j.at("metrics"));
  for (const auto& lj : j.at("epoch_logs")) {
    r.epoch_logs.push_back(epoch_log_from_json(lj));
  }
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return r;
}

void RunReport::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

RunReport RunReport::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ojson j;
  try {
    in >> j;
  } catch (const ojson::parse_error& e) {
    throw std::runtime_error(path.string() + ": corrupt report: " + e.what());
  }
  return from_json(j);
}

std::string RunReport::canonical_dump() const {
  ojson j = to_json();
  j.erase("wall_clock_seconds");
  return j.dump(2);
}

}  // namespace ecfm
