#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ecfm/corpus.hpp"

namespace ecfm {

// Synthetic event-correlated corpus: each event draws a class, each member
// news inherits it with probability `purity`, and texts mix shared tokens
// with the news class's signal tokens so the classes stay learnable by
// bag-of-words models.
struct SynthConfig {
  int n_events = 200;
  int news_per_event = 20;
  double labeled_frac = 0.1;
  double purity = 1.0;          // in [0.5, 1]
  double class_balance = 0.5;   // probability an event is Real, in (0,1)
  int shared_tokens = 100;
  int class_tokens = 20;        // signal tokens per class
  int tokens_per_news = 12;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthOutput {
  Dataset dataset;
  // Ground truth kept out of the dataset so unlabeled items stay unlabeled.
  std::map<std::string, Label> true_class;       // per news id
  std::map<std::int64_t, Label> event_class;     // per event id
};

SynthOutput generate(const SynthConfig& config);

}  // namespace ecfm
