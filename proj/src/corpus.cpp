#include "ecfm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ecfm/rng.hpp"

namespace ecfm {

using ojson = nlohmann::ordered_json;

const char* to_string(Label label) {
  return label == Label::Real ? "real" : "fake";
}

const char* to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    default: return "unlabeled";
  }
}

namespace {

bool whitespace_only(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

Label parse_label(const std::string& s) {
  if (s == "real") return Label::Real;
  if (s == "fake") return Label::Fake;
  throw std::runtime_error("unknown label value \"" + s + "\"");
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  if (s == "unlabeled") return Split::Unlabeled;
  throw std::runtime_error("unknown split value \"" + s + "\"");
}

void validate_item(const NewsItem& item) {
  if (item.id.empty()) {
    throw std::runtime_error("item with empty id");
  }
  if (item.text.empty() || whitespace_only(item.text)) {
    throw std::runtime_error("item \"" + item.id + "\" has empty text");
  }
  if (item.event_id && *item.event_id < 0) {
    throw std::runtime_error("item \"" + item.id + "\" has negative event_id");
  }
  if ((item.split == Split::Test || item.split == Split::Train) &&
      !item.label) {
    throw std::runtime_error("item \"" + item.id + "\" has split " +
                             to_string(item.split) + " but no label");
  }
}

NewsItem item_from_json(const ojson& obj) {
  NewsItem item;
  if (!obj.is_object()) throw std::runtime_error("line is not a JSON object");
  if (!obj.contains("id") || !obj["id"].is_string()) {
    throw std::runtime_error("missing or non-string \"id\"");
  }
  item.id = obj["id"].get<std::string>();
  if (!obj.contains("text") || !obj["text"].is_string()) {
    throw std::runtime_error("missing or non-string \"text\"");
  }
  item.text = obj["text"].get<std::string>();
  if (obj.contains("label")) {
    if (!obj["label"].is_string()) throw std::runtime_error("non-string \"label\"");
    item.label = parse_label(obj["label"].get<std::string>());
  }
  if (obj.contains("event_id")) {
    if (!obj["event_id"].is_number_integer()) {
      throw std::runtime_error("non-integer \"event_id\"");
    }
    item.event_id = obj["event_id"].get<std::int64_t>();
  }
  if (obj.contains("split")) {
    if (!obj["split"].is_string()) throw std::runtime_error("non-string \"split\"");
    item.split = parse_split(obj["split"].get<std::string>());
  } else {
    item.split = item.label ? Split::Train : Split::Unlabeled;
  }
  return item;
}

ojson item_to_json(const NewsItem& item) {
  ojson obj;
  obj["id"] = item.id;
  obj["text"] = item.text;
  if (item.label) obj["label"] = to_string(*item.label);
  if (item.event_id) obj["event_id"] = *item.event_id;
  obj["split"] = to_string(item.split);
  return obj;
}

}  // namespace

Dataset Dataset::from_items(std::vector<NewsItem> items) {
  Dataset d;
  d.items_ = std::move(items);
  d.by_id_.reserve(d.items_.size());
  for (std::size_t i = 0; i < d.items_.size(); ++i) {
    const NewsItem& item = d.items_[i];
    validate_item(item);
    if (!d.by_id_.emplace(item.id, i).second) {
      throw std::runtime_error("duplicate id \"" + item.id + "\"");
    }
    if (item.event_id) {
      d.event_index_[*item.event_id].push_back(item.id);
    }
  }
  return d;
}

const NewsItem* Dataset::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &items_[it->second];
}

std::vector<std::size_t> Dataset::indices_of(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].split == split) out.push_back(i);
  }
  return out;
}

Dataset ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<NewsItem> items;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (whitespace_only(line)) continue;
    ojson obj;
    try {
      obj = ojson::parse(line);
    } catch (const ojson::parse_error& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": malformed JSON: " + e.what());
    }
    try {
      items.push_back(item_from_json(obj));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return Dataset::from_items(std::move(items));
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  for (const NewsItem& item : dataset.items()) {
    out << item_to_json(item).dump() << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::pair<std::vector<NewsItem>, std::vector<NewsItem>> split_labeled(
    const std::vector<NewsItem>& items, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("split ratio must lie in (0,1)");
  }
  std::vector<const NewsItem*> sorted;
  sorted.reserve(items.size());
  for (const NewsItem& item : items) {
    if (!item.label) {
      throw std::invalid_argument("split_labeled: item \"" + item.id +
                                  "\" is unlabeled");
    }
    sorted.push_back(&item);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const NewsItem* a, const NewsItem* b) { return a->id < b->id; });
  rng::Engine eng(seed);
  rng::shuffle(sorted, eng);

  // Nudge before flooring so ratios like 0.7 that sit one ulp below a
  // rational do not lose a whole item.
  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(sorted.size()) + 1e-9));
  std::vector<NewsItem> train, test;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    (i < n_train ? train : test).push_back(*sorted[i]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace ecfm
