#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecfm/corpus.hpp"
#include "ecfm/report.hpp"

namespace ecfm {

struct ConfusionMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool zero_denominator_precision = false;
  bool zero_denominator_recall = false;
};

// Standard accuracy/precision/recall/F1 with Fake as the positive class.
// Zero-denominator precision/recall are reported as 0 and flagged.
ConfusionMetrics confusion_metrics(const std::vector<Label>& predictions,
                                   const std::vector<Label>& labels);

// Rank-based (Mann-Whitney) AUC with midranks for ties: the probability a
// random Fake outranks a random Real on the fake-ness score, ties counting
// one half. Throws on single-class input. Exact: the numerator is
// accumulated in integers.
double auc_roc(const std::vector<double>& fakeness,
               const std::vector<Label>& labels);

struct MetricDeltas {
  double accuracy = 0.0;
  double auc_roc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Signed differences a - b for each headline metric.
MetricDeltas compare(const RunReport& a, const RunReport& b);

struct SweepRow {
  double alpha = 0.0;
  Metrics mean;  // metric means over the runs at this alpha
};

// Runs the pipeline `runs` times per grid alpha with seeds
// config.seed + 0 .. config.seed + runs - 1 and reports per-alpha metric
// means. `jobs` bounds worker threads (0 = hardware concurrency); results
// are assembled in grid order regardless of scheduling.
std::vector<SweepRow> sweep_alpha(const std::vector<double>& grid, int runs,
                                  const PipelineConfig& config,
                                  const Dataset& dataset, int jobs = 1);

nlohmann::ordered_json sweep_to_json(const std::vector<SweepRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string metrics_to_csv(const Metrics& metrics);
std::string positive_fraction_csv(const std::vector<EpochLog>& logs);
std::string deltas_to_csv(const MetricDeltas& d);

}  // namespace ecfm
