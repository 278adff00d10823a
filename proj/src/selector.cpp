#include "ecfm/selector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecfm {

namespace {
constexpr double kClamp = 1e-12;
}

const char* to_string(SelectorOrder order) {
  switch (order) {
    case SelectorOrder::Largest: return "largest";
    case SelectorOrder::Smallest: return "smallest";
    default: return "symmetric";
  }
}

SelectorOrder selector_order_from_string(const std::string& s) {
  if (s == "largest") return SelectorOrder::Largest;
  if (s == "smallest") return SelectorOrder::Smallest;
  if (s == "symmetric") return SelectorOrder::Symmetric;
  throw std::invalid_argument("unknown selector order \"" + s + "\"");
}

double news_entropy(double p) {
  const double p_prime = std::max(kClamp, 1.0 - p);
  return -p * std::log(p_prime);
}

double symmetric_entropy(double p) {
  const double a = std::max(kClamp, p);
  const double b = std::max(kClamp, 1.0 - p);
  return -(p * std::log(a) + (1.0 - p) * std::log(b));
}

EntropyScore make_score(std::string id, double p, Label pseudo_label,
                        SelectorOrder order) {
  EntropyScore s;
  s.id = std::move(id);
  s.p = p;
  s.p_prime = 1.0 - p;
  s.H = order == SelectorOrder::Symmetric ? symmetric_entropy(p)
                                          : news_entropy(p);
  s.pseudo_label = pseudo_label;
  return s;
}

std::size_t scheduled_count(int t, std::size_t pool_size) {
  if (t < 1) throw std::invalid_argument("update number t must be >= 1");
  const std::size_t pct =
      std::min<std::size_t>(2 * static_cast<std::size_t>(t), 100);
  const std::size_t k = (pool_size * pct + 99) / 100;  // ceil
  return std::min(pool_size, k);
}

std::vector<EntropyScore> select_top(std::vector<EntropyScore> scores, int t,
                                     SelectorOrder order) {
  const std::size_t k = scheduled_count(t, scores.size());
  const bool descending = order == SelectorOrder::Largest;
  std::sort(scores.begin(), scores.end(),
            [descending](const EntropyScore& a, const EntropyScore& b) {
              if (a.H != b.H) return descending ? a.H > b.H : a.H < b.H;
              return a.id < b.id;
            });
  scores.resize(k);
  return scores;
}

}  // namespace ecfm
