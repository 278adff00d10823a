#pragma once

#include <string>
#include <vector>

#include "ecfm/corpus.hpp"

namespace ecfm {

enum class SelectorOrder {
  Largest,    // default: select the largest news-entropy values
  Smallest,   // literal ascending-order reading, kept for ablation
  Symmetric,  // experimental: Shannon entropy, most-confident (smallest) first
};

const char* to_string(SelectorOrder order);
SelectorOrder selector_order_from_string(const std::string& s);

struct EntropyScore {
  std::string id;
  double p = 0.0;        // descriptive credibility
  double p_prime = 0.0;  // 1 - p
  double H = 0.0;        // news entropy, nats
  Label pseudo_label = Label::Fake;
};

// News entropy H = -p * ln(1 - p), with 1 - p clamped to [1e-12, 1].
// Strictly increasing in p, so large H marks confidently-real news.
double news_entropy(double p);

// Shannon entropy -[p ln p + (1-p) ln(1-p)] with the same clamping; only
// used by SelectorOrder::Symmetric.
double symmetric_entropy(double p);

EntropyScore make_score(std::string id, double p, Label pseudo_label,
                        SelectorOrder order = SelectorOrder::Largest);

// Fraction of the pool eligible at update t under the 2t% schedule, capped
// at 100%: k = min(n, ceil(n * min(2t,100) / 100)).
std::size_t scheduled_count(int t, std::size_t pool_size);

// Picks the scheduled number of samples for update t >= 1; preference order
// follows `order`, ties broken by news id ascending. Returns the chosen
// scores (id + pseudo label pairs preserved).
std::vector<EntropyScore> select_top(std::vector<EntropyScore> scores, int t,
                                     SelectorOrder order = SelectorOrder::Largest);

}  // namespace ecfm
