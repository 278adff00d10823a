#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ecfm/corpus.hpp"

namespace ecfm {

// Sparse term-frequency vector over interned token ids, kept sorted by id.
using SparseVec = std::vector<std::pair<int, double>>;

double l2_norm(const SparseVec& v);
double dot(const SparseVec& a, const SparseVec& b);

// Standard cosine similarity; throws on a zero vector.
double cosine_similarity(const SparseVec& a, const SparseVec& b);

// Incremental single-pass clustering state. Centroids are L2-normalized
// means of the (normalized) member vectors; cluster ids are contiguous
// from 0. Order-dependent by design, so strictly single-threaded.
class ClusterState {
 public:
  explicit ClusterState(double tau) : tau_(tau) {}

  // Assigns v to the best existing cluster with similarity >= tau (ties go
  // to the lowest cluster id) or founds a new one. Returns the cluster id.
  int assign(const SparseVec& v);

  std::size_t cluster_count() const { return centroids_.size(); }
  const SparseVec& centroid(std::size_t i) const { return centroids_[i]; }
  int member_count(std::size_t i) const { return member_counts_[i]; }
  double tau() const { return tau_; }

 private:
  double tau_;
  std::vector<SparseVec> centroids_;      // normalized
  std::vector<SparseVec> raw_sums_;       // sums of normalized member vectors
  std::vector<int> member_counts_;
};

// Fills in event ids for every item that lacks one, clustering those items
// in input order over tf-cosine bag-of-words vectors. Existing event ids are
// preserved; new clusters receive ids above the largest existing one.
// Throws if an item needing assignment tokenizes to nothing.
Dataset assign_events(const Dataset& dataset, double tau);

}  // namespace ecfm
