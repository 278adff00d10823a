#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecfm/config.hpp"

namespace ecfm {

// One self-training update's log line.
struct EpochLog {
  int t = 0;
  double positive_fraction = 0.0;  // share of pseudo-Real among pseudo-labeled
  double dt = 0.0;
  int selected_count = 0;
  double labeled_loss = 0.0;
  double pseudo_loss = 0.0;
  std::string event_cred_digest;

  bool operator==(const EpochLog&) const = default;
};

struct Metrics {
  double accuracy = 0.0;
  double auc_roc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool zero_denominator_precision = false;
  bool zero_denominator_recall = false;
  bool degenerate_auc = false;  // single-class test set; auc reported as 0.5

  bool operator==(const Metrics&) const = default;
};

struct RunReport {
  PipelineConfig config;
  Metrics metrics;
  std::vector<EpochLog> epoch_logs;
  double wall_clock_seconds = 0.0;

  nlohmann::ordered_json to_json() const;
  static RunReport from_json(const nlohmann::ordered_json& j);
  void save(const std::filesystem::path& path) const;
  static RunReport load(const std::filesystem::path& path);

  // Canonical bytes with the wall clock stripped, for determinism checks.
  std::string canonical_dump() const;
};

nlohmann::ordered_json epoch_log_to_json(const EpochLog& log);
EpochLog epoch_log_from_json(const nlohmann::ordered_json& j);

}  // namespace ecfm
