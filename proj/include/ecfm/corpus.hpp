#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ecfm {

enum class Label { Real, Fake };
enum class Split { Train, Test, Unlabeled };

const char* to_string(Label label);
const char* to_string(Split split);

// One news text plus whatever supervision it carries. Items with split Train
// or Test must be labeled; Unlabeled items never expose a label to the
// pipeline even if the source file carried one.
struct NewsItem {
  std::string id;
  std::string text;
  std::optional<Label> label;
  std::optional<std::int64_t> event_id;
  Split split = Split::Unlabeled;

  bool operator==(const NewsItem&) const = default;
};

// Immutable partitioned collection: labeled train / unlabeled / test, with an
// index from event id to member item ids. Safe to share across threads once
// constructed.
class Dataset {
 public:
  Dataset() = default;
  static Dataset from_items(std::vector<NewsItem> items);

  const std::vector<NewsItem>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const NewsItem& at(std::size_t i) const { return items_[i]; }
  const NewsItem* find(const std::string& id) const;

  const std::map<std::int64_t, std::vector<std::string>>& event_index() const {
    return event_index_;
  }

  std::vector<std::size_t> indices_of(Split split) const;

 private:
  std::vector<NewsItem> items_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::int64_t, std::vector<std::string>> event_index_;
};

// Reads a JSONL dataset: one object per line with fields id, text, and
// optional label/event_id/split. Items lacking a split are assigned Train
// when labeled, Unlabeled otherwise. Throws std::runtime_error naming the
// offending line or id on malformed input.
Dataset ingest(const std::filesystem::path& path);

// Inverse of ingest: optional fields are omitted (never null), split always
// written, key order fixed, so equal datasets serialize byte-identically.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

// Seed-determined partition of labeled items into (train, test) with
// |train| = floor(ratio * n). Keys on item ids, not positions: reordering the
// input does not change membership.
std::pair<std::vector<NewsItem>, std::vector<NewsItem>> split_labeled(
    const std::vector<NewsItem>& items, double ratio, std::uint64_t seed);

}  // namespace ecfm
