#include "ecfm/clusterer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "ecfm/characterizer.hpp"

namespace ecfm {

double l2_norm(const SparseVec& v) {
  double s = 0.0;
  for (const auto& [idx, val] : v) s += val * val;
  return std::sqrt(s);
}

double dot(const SparseVec& a, const SparseVec& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (a[i].first > b[j].first) {
      ++j;
    } else {
      s += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

double cosine_similarity(const SparseVec& a, const SparseVec& b) {
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine_similarity: zero vector");
  }
  return dot(a, b) / (na * nb);
}

namespace {

SparseVec normalized(const SparseVec& v) {
  const double n = l2_norm(v);
  SparseVec out = v;
  for (auto& [idx, val] : out) val /= n;
  return out;
}

void add_into(SparseVec& acc, const SparseVec& v) {
  SparseVec merged;
  merged.reserve(acc.size() + v.size());
  std::size_t i = 0, j = 0;
  while (i < acc.size() || j < v.size()) {
    if (j == v.size() || (i < acc.size() && acc[i].first < v[j].first)) {
      merged.push_back(acc[i++]);
    } else if (i == acc.size() || v[j].first < acc[i].first) {
      merged.push_back(v[j++]);
    } else {
      merged.emplace_back(acc[i].first, acc[i].second + v[j].second);
      ++i;
      ++j;
    }
  }
  acc = std::move(merged);
}

}  // namespace

int ClusterState::assign(const SparseVec& v) {
  if (v.empty()) {
    throw std::invalid_argument("ClusterState::assign: empty vector");
  }
  const SparseVec nv = normalized(v);

  int best = -1;
  double best_sim = 0.0;
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    const double sim = dot(nv, centroids_[c]);  // both unit length
    if (sim >= tau_ && (best < 0 || sim > best_sim)) {
      best = static_cast<int>(c);
      best_sim = sim;
    }
  }

  if (best < 0) {
    centroids_.push_back(nv);
    raw_sums_.push_back(nv);
    member_counts_.push_back(1);
    return static_cast<int>(centroids_.size()) - 1;
  }

  add_into(raw_sums_[best], nv);
  member_counts_[best] += 1;
  centroids_[best] = normalized(raw_sums_[best]);
  return best;
}

Dataset assign_events(const Dataset& dataset, double tau) {
  std::int64_t next_id = 0;
  for (const auto& [event_id, members] : dataset.event_index()) {
    next_id = std::max(next_id, event_id + 1);
  }

  std::unordered_map<std::string, int> token_ids;
  auto vectorize = [&token_ids](const std::string& text) {
    std::unordered_map<int, double> counts;
    for (const std::string& tok : tokenize(text)) {
      auto [it, inserted] =
          token_ids.emplace(tok, static_cast<int>(token_ids.size()));
      counts[it->second] += 1.0;
    }
    SparseVec v(counts.begin(), counts.end());
    std::sort(v.begin(), v.end());
    return v;
  };

  ClusterState state(tau);
  std::vector<NewsItem> items = dataset.items();
  for (NewsItem& item : items) {
    if (item.event_id) continue;
    SparseVec v = vectorize(item.text);
    if (v.empty()) {
      throw std::runtime_error("assign_events: item \"" + item.id +
                               "\" tokenizes to nothing");
    }
    item.event_id = next_id + state.assign(v);
  }
  return Dataset::from_items(std::move(items));
}

}  // namespace ecfm
