#include "ecfm/annotator.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecfm {

double event_credibility(std::span<const double> member_credibilities) {
  if (member_credibilities.empty()) {
    throw std::invalid_argument(
        "event_credibility: no members with known credibility (cold start)");
  }
  double sum = 0.0;
  for (double c : member_credibilities) sum += c;
  return sum / static_cast<double>(member_credibilities.size());
}

double optimized_credibility(double p, double ec, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0,1]");
  }
  return alpha * p + (1.0 - alpha) * ec;
}

CredibilityView build_credibility_view(
    std::map<std::string, double> news_credibility,
    std::map<std::int64_t, double> event_credibility, double alpha,
    const std::map<std::string, std::int64_t>& event_of_news, bool use_event) {
  CredibilityView view;
  view.news_credibility = std::move(news_credibility);
  view.event_credibility = std::move(event_credibility);
  view.alpha = alpha;
  for (const auto& [id, p] : view.news_credibility) {
    if (!use_event) {
      view.optimized[id] = p;
      continue;
    }
    double ec = kNeutralCredibility;
    auto ev = event_of_news.find(id);
    if (ev != event_of_news.end()) {
      auto it = view.event_credibility.find(ev->second);
      if (it != view.event_credibility.end()) ec = it->second;
    }
    view.optimized[id] = optimized_credibility(p, ec, alpha);
  }
  return view;
}

ThresholdModel find_threshold(std::vector<LabeledCredibility> labeled) {
  if (labeled.empty()) {
    throw std::invalid_argument("find_threshold: empty labeled set");
  }
  std::sort(labeled.begin(), labeled.end(),
            [](const LabeledCredibility& a, const LabeledCredibility& b) {
              return a.ce < b.ce;
            });
  const std::size_t n = labeled.size();

  // Suffix counts of Real labels: predicting from cut position i means items
  // [0,i) are called Fake and [i,n) Real.
  std::vector<std::size_t> real_at_or_after(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    real_at_or_after[i] =
        real_at_or_after[i + 1] + (labeled[i].label == Label::Real ? 1 : 0);
  }

  ThresholdModel best;
  std::size_t fakes_before = 0;
  bool have_best = false;
  for (std::size_t i = 0; i <= n; ++i) {
    // Cut positions inside a run of equal Ce values are not realizable
    // thresholds; only boundaries between distinct values count.
    const bool realizable = i == 0 || i == n || labeled[i - 1].ce != labeled[i].ce;
    if (realizable) {
      const std::size_t correct = fakes_before + real_at_or_after[i];
      const double acc = static_cast<double>(correct) / static_cast<double>(n);
      if (!have_best || acc > best.achieved_accuracy) {
        best.achieved_accuracy = acc;
        if (i == 0) {
          best.dt = labeled.front().ce - 1.0;
        } else if (i == n) {
          best.dt = labeled.back().ce + 1.0;
        } else {
          best.dt = (labeled[i - 1].ce + labeled[i].ce) / 2.0;
        }
        have_best = true;
      }
      best.candidate_count += 1;
    }
    if (i < n && labeled[i].label == Label::Fake) ++fakes_before;
  }
  return best;
}

std::map<std::string, Label> assign_pseudo_labels(
    const std::vector<std::string>& unlabeled_ids,
    const std::map<std::string, double>& ce, double dt) {
  std::map<std::string, Label> out;
  for (const std::string& id : unlabeled_ids) {
    auto it = ce.find(id);
    if (it == ce.end()) {
      throw std::runtime_error("assign_pseudo_labels: no Ce entry for \"" +
                               id + "\"");
    }
    out[id] = it->second >= dt ? Label::Real : Label::Fake;
  }
  return out;
}

}  // namespace ecfm
