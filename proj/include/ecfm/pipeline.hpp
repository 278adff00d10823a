#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <vector>

#include "ecfm/characterizer.hpp"
#include "ecfm/config.hpp"
#include "ecfm/corpus.hpp"
#include "ecfm/kalman.hpp"
#include "ecfm/report.hpp"

namespace ecfm {

// Stateful self-training run. Each step scores every news item, folds event
// credibility into pseudo labels, grows the training set through the entropy
// schedule, and applies one characterizer update. Deterministic for a fixed
// config and dataset; checkpoints capture the full state (dataset included)
// so a resumed run finishes bit-identically.
class PipelineRun {
 public:
  PipelineRun(PipelineConfig config, Dataset dataset);

  void step();
  bool done() const { return t_done_ >= cfg_.updates; }
  int completed_updates() const { return t_done_; }
  const std::vector<EpochLog>& epoch_logs() const { return logs_; }
  const std::map<std::int64_t, EventCredState>& kalman_states() const {
    return kalman_states_;
  }
  const Characterizer& characterizer() const { return model_; }
  const PipelineConfig& config() const { return cfg_; }

  // Replaces embedding rows for vocabulary tokens found in `wv`; call before
  // the first step. Returns the number of rows applied.
  int apply_word_vectors(const WordVectors& wv) {
    return model_.apply_word_vectors(wv);
  }

  // Evaluates the test partition with the final threshold and returns the
  // full report. Valid once at least one update has run.
  RunReport finish() const;

  void checkpoint(const std::filesystem::path& path) const;
  static PipelineRun resume(const std::filesystem::path& path);

  // Optional per-update observer (progress reporting).
  std::function<void(const EpochLog&)> on_update;

 private:
  PipelineRun() = default;
  void prepare_texts();
  std::vector<double> score_all() const;
  std::map<std::int64_t, double> observed_event_credibility(
      const std::vector<double>& scores) const;

  PipelineConfig cfg_;
  Dataset data_;
  std::vector<std::size_t> labeled_idx_, unlabeled_idx_, test_idx_;
  std::vector<PreparedText> prepared_;
  Characterizer model_;
  std::map<std::int64_t, EventCredState> kalman_states_;
  rng::Engine eng_;
  int t_done_ = 0;
  std::vector<EpochLog> logs_;
};

// Convenience wrapper: construct, run every update, finish.
RunReport run(const PipelineConfig& config, const Dataset& dataset,
              const std::function<void(const EpochLog&)>& on_update = {});

}  // namespace ecfm
