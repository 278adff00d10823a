#include "ecfm/eval.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ecfm/pipeline.hpp"

namespace ecfm {

using ojson = nlohmann::ordered_json;

ConfusionMetrics confusion_metrics(const std::vector<Label>& predictions,
                                   const std::vector<Label>& labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("confusion_metrics: length mismatch");
  }
  if (predictions.empty()) {
    throw std::invalid_argument("confusion_metrics: empty input");
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred_fake = predictions[i] == Label::Fake;
    const bool is_fake = labels[i] == Label::Fake;
    if (pred_fake && is_fake) ++tp;
    else if (pred_fake && !is_fake) ++fp;
    else if (!pred_fake && is_fake) ++fn;
    else ++tn;
  }
  ConfusionMetrics m;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(labels.size());
  if (tp + fp == 0) {
    m.zero_denominator_precision = true;
  } else {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    m.zero_denominator_recall = true;
  } else {
    m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

double auc_roc(const std::vector<double>& fakeness,
               const std::vector<Label>& labels) {
  if (fakeness.size() != labels.size()) {
    throw std::invalid_argument("auc_roc: length mismatch");
  }
  std::vector<std::size_t> idx(fakeness.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&fakeness](std::size_t a, std::size_t b) {
    return fakeness[a] < fakeness[b];
  });

  std::uint64_t n_fake = 0, n_real = 0;
  for (Label l : labels) (l == Label::Fake ? n_fake : n_real) += 1;
  if (n_fake == 0 || n_real == 0) {
    throw std::invalid_argument("auc_roc: both classes required");
  }

  // Walk tie groups; 2 * midrank of a group spanning 1-based ranks
  // [lo, hi] is lo + hi, which keeps the rank sum integral.
  std::uint64_t twice_fake_ranksum = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    std::uint64_t fakes_in_group = 0;
    while (j < idx.size() && fakeness[idx[j]] == fakeness[idx[i]]) {
      if (labels[idx[j]] == Label::Fake) ++fakes_in_group;
      ++j;
    }
    twice_fake_ranksum += fakes_in_group * static_cast<std::uint64_t>(i + j + 1);
    i = j;
  }
  const std::uint64_t twice_u = twice_fake_ranksum - n_fake * (n_fake + 1);
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(n_fake) * static_cast<double>(n_real));
}

MetricDeltas compare(const RunReport& a, const RunReport& b) {
  MetricDeltas d;
  d.accuracy = a.metrics.accuracy - b.metrics.accuracy;
  d.auc_roc = a.metrics.auc_roc - b.metrics.auc_roc;
  d.precision = a.metrics.precision - b.metrics.precision;
  d.recall = a.metrics.recall - b.metrics.recall;
  d.f1 = a.metrics.f1 - b.metrics.f1;
  return d;
}

std::vector<SweepRow> sweep_alpha(const std::vector<double>& grid, int runs,
                                  const PipelineConfig& config,
                                  const Dataset& dataset, int jobs) {
  if (grid.empty()) throw std::invalid_argument("sweep_alpha: empty grid");
  if (runs < 1) throw std::invalid_argument("sweep_alpha: runs must be >= 1");

  struct Task {
    std::size_t grid_pos;
    int run;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (int r = 0; r < runs; ++r) tasks.push_back({g, r});
  }
  std::vector<Metrics> results(tasks.size());

  auto execute = [&](const Task& task) {
    PipelineConfig cfg = config;
    cfg.alpha = grid[task.grid_pos];
    cfg.seed = config.seed + static_cast<std::uint64_t>(task.run);
    results[task.grid_pos * runs + task.run] = run(cfg, dataset).metrics;
  };

  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
  if (workers <= 1) {
    for (const Task& task : tasks) execute(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          try {
            execute(tasks[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepRow row;
    row.alpha = grid[g];
    for (int r = 0; r < runs; ++r) {
      const Metrics& m = results[g * runs + r];
      row.mean.accuracy += m.accuracy;
      row.mean.auc_roc += m.auc_roc;
      row.mean.precision += m.precision;
      row.mean.recall += m.recall;
      row.mean.f1 += m.f1;
    }
    row.mean.accuracy /= runs;
    row.mean.auc_roc /= runs;
    row.mean.precision /= runs;
    row.mean.recall /= runs;
    row.mean.f1 /= runs;
    rows.push_back(row);
  }
  return rows;
}

ojson sweep_to_json(const std::vector<SweepRow>& rows) {
  ojson j = ojson::array();
  for (const SweepRow& row : rows) {
    j.push_back(ojson{{"alpha", row.alpha},
                      {"accuracy", row.mean.accuracy},
                      {"auc_roc", row.mean.auc_roc},
                      {"precision", row.mean.precision},
                      {"recall", row.mean.recall},
                      {"f1", row.mean.f1}});
  }
  return j;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,accuracy,auc_roc,precision,recall,f1\n";
  for (const SweepRow& row : rows) {
    out += format_double(row.alpha) + ',' + format_double(row.mean.accuracy) +
           ',' + format_double(row.mean.auc_roc) + ',' +
           format_double(row.mean.precision) + ',' +
           format_double(row.mean.recall) + ',' + format_double(row.mean.f1) +
           '\n';
  }
  return out;
}

std::string metrics_to_csv(const Metrics& metrics) {
  std::string out = "metric,value\n";
  out += "accuracy," + format_double(metrics.accuracy) + '\n';
  out += "auc_roc," + format_double(metrics.auc_roc) + '\n';
  out += "precision," + format_double(metrics.precision) + '\n';
  out += "recall," + format_double(metrics.recall) + '\n';
  out += "f1," + format_double(metrics.f1) + '\n';
  return out;
}

std::string positive_fraction_csv(const std::vector<EpochLog>& logs) {
  std::string out = "t,positive_fraction\n";
  for (const EpochLog& log : logs) {
    out += std::to_string(log.t) + ',' + format_double(log.positive_fraction) +
           '\n';
  }
  return out;
}

std::string deltas_to_csv(const MetricDeltas& d) {
  std::string out = "metric,delta\n";
  out += "accuracy," + format_double(d.accuracy) + '\n';
  out += "auc_roc," + format_double(d.auc_roc) + '\n';
  out += "precision," + format_double(d.precision) + '\n';
  out += "recall," + format_double(d.recall) + '\n';
  out += "f1," + format_double(d.f1) + '\n';
  return out;
}

}  // namespace ecfm
