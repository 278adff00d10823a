#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ecfm/corpus.hpp"

namespace ecfm {

// Event credibility: arithmetic mean of the known credibilities of the
// event's member news. Throws on an empty member list (cold start); callers
// substitute the neutral prior 0.5.
double event_credibility(std::span<const double> member_credibilities);

inline constexpr double kNeutralCredibility = 0.5;

// Optimized news credibility Ce = alpha * p + (1 - alpha) * ec.
// Throws if alpha lies outside [0,1].
double optimized_credibility(double p, double ec, double alpha);

// One update's credibility picture: descriptive scores, per-event
// credibility (raw or Kalman-corrected), and the fused Ce per news. Ce is
// defined for every news with a score; events missing a credibility entry
// fall back to the neutral prior (cold start).
struct CredibilityView {
  std::map<std::string, double> news_credibility;     // p_theta by news id
  std::map<std::int64_t, double> event_credibility;   // by event id
  double alpha = 0.6;
  std::map<std::string, double> optimized;            // Ce by news id
};

// Fuses per-news and per-event credibility into Ce. With use_event false
// (the ablation), Ce is the descriptive credibility alone.
CredibilityView build_credibility_view(
    std::map<std::string, double> news_credibility,
    std::map<std::int64_t, double> event_credibility, double alpha,
    const std::map<std::string, std::int64_t>& event_of_news, bool use_event);

struct ThresholdModel {
  double dt = 0.0;
  double achieved_accuracy = 0.0;
  int candidate_count = 0;
};

struct LabeledCredibility {
  double ce = 0.0;
  Label label = Label::Fake;
};

// Finds the cutoff dt maximizing the accuracy of (Ce >= dt => Real) over the
// labeled set. Candidates are min-1, midpoints of adjacent distinct sorted
// Ce values, and max+1; ties go to the smallest candidate.
ThresholdModel find_threshold(std::vector<LabeledCredibility> labeled);

// Real iff Ce >= dt (boundary inclusive), Fake otherwise. Throws naming the
// id when an unlabeled item has no Ce entry.
std::map<std::string, Label> assign_pseudo_labels(
    const std::vector<std::string>& unlabeled_ids,
    const std::map<std::string, double>& ce, double dt);

}  // namespace ecfm
