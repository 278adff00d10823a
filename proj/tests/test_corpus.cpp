#include <algorithm>
#include <set>

#include <doctest.h>

#include "ecfm/corpus.hpp"
#include "helpers.hpp"

using namespace ecfm;
using testutil::TempDir;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("ingest parses valid lines in file order") {
  TempDir dir;
  const auto path = dir.file("d.jsonl");
  testutil::write_lines(
      path, {R"({"id":"n1","text":"first story","label":"real"})",
             R"({"id":"n2","text":"second story","event_id":3})"});
  const Dataset d = ingest(path);
  REQUIRE(d.size() == 2);
  CHECK(d.at(0).id == "n1");
  CHECK(d.at(0).label == Label::Real);
  CHECK(d.at(0).split == Split::Train);  // labeled, no split field
  CHECK(d.at(1).id == "n2");
  CHECK(!d.at(1).label.has_value());
  CHECK(d.at(1).split == Split::Unlabeled);
  CHECK(d.at(1).event_id == 3);
  CHECK(d.event_index().at(3) == std::vector<std::string>{"n2"});
}

TEST_CASE("ingest rejects duplicate ids naming the id") {
  TempDir dir;
  const auto path = dir.file("dup.jsonl");
  testutil::write_lines(path, {R"({"id":"n1","text":"a"})",
                               R"({"id":"n1","text":"b"})"});
  CHECK_THROWS_WITH_AS(ingest(path), doctest::Contains("n1"),
                       std::runtime_error);
}

TEST_CASE("ingest rejects empty text") {
  TempDir dir;
  const auto path = dir.file("empty.jsonl");
  testutil::write_lines(path, {R"({"id":"n1","text":"  "})"});
  CHECK_THROWS_AS(ingest(path), std::runtime_error);
}

TEST_CASE("ingest rejects a test item without label") {
  TempDir dir;
  const auto path = dir.file("t.jsonl");
  testutil::write_lines(path, {R"({"id":"n1","text":"x","split":"test"})"});
  CHECK_THROWS_AS(ingest(path), std::runtime_error);
}

TEST_CASE("ingest reports the line number of malformed JSON") {
  TempDir dir;
  const auto path = dir.file("bad.jsonl");
  testutil::write_lines(path, {R"({"id":"n1","text":"ok"})", "{not json"});
  CHECK_THROWS_WITH_AS(ingest(path), doctest::Contains(":2"),
                       std::runtime_error);
}

TEST_CASE("write_dataset omits absent optional fields") {
  TempDir dir;
  NewsItem item;
  item.id = "n1";
  item.text = "plain";
  item.split = Split::Unlabeled;
  const Dataset d = Dataset::from_items({item});
  const auto path = dir.file("out.jsonl");
  write_dataset(d, path);
  const std::string contents = testutil::read_file(path);
  CHECK(contents ==
        "{\"id\":\"n1\",\"text\":\"plain\",\"split\":\"unlabeled\"}\n");
}

TEST_CASE("write_dataset of an empty dataset yields an empty file") {
  TempDir dir;
  const auto path = dir.file("empty.jsonl");
  write_dataset(Dataset{}, path);
  CHECK(testutil::read_file(path).empty());
}

TEST_CASE("ingest after write_dataset reproduces the dataset") {
  rng::Engine eng(7);
  TempDir dir;
  for (int trial = 0; trial < 40; ++trial) {
    const auto items = testutil::random_items(eng, 1 + rng::uniform_below(eng, 12));
    const Dataset d = Dataset::from_items(items);
    const auto path = dir.file("rt.jsonl");
    write_dataset(d, path);
    const Dataset back = ingest(path);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      CAPTURE(trial);
      CHECK(back.at(i) == d.at(i));
    }
  }
}

TEST_CASE("split honors the 8:2 ratio") {
  rng::Engine eng(1);
  std::vector<NewsItem> items;
  for (int i = 0; i < 10; ++i) {
    NewsItem item;
    item.id = "n" + std::to_string(i);
    item.text = "t";
    item.label = Label::Real;
    items.push_back(item);
  }
  const auto [train, test] = split_labeled(items, 0.8, 42);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);
}

TEST_CASE("split floors the train size") {
  NewsItem item;
  item.id = "only";
  item.text = "t";
  item.label = Label::Fake;
  const auto [train, test] = split_labeled({item}, 0.8, 1);
  CHECK(train.empty());
  CHECK(test.size() == 1);
}

TEST_CASE("split is deterministic for a fixed seed") {
  rng::Engine eng(3);
  std::vector<NewsItem> items;
  for (int i = 0; i < 17; ++i) {
    NewsItem item;
    item.id = "n" + std::to_string(i);
    item.text = "t";
    item.label = Label::Real;
    items.push_back(item);
  }
  const auto a = split_labeled(items, 0.6, 99);
  const auto b = split_labeled(items, 0.6, 99);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("split rejects unlabeled items") {
  NewsItem item;
  item.id = "n0";
  item.text = "t";
  CHECK_THROWS_AS(split_labeled({item}, 0.5, 0), std::invalid_argument);
}

TEST_CASE("split partitions the input for any seed and ratio") {
  rng::Engine eng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng::uniform_below(eng, 25);
    std::vector<NewsItem> items;
    for (std::size_t i = 0; i < n; ++i) {
      NewsItem item;
      item.id = "n" + std::to_string(i);
      item.text = "t";
      item.label = rng::bernoulli(eng, 0.5) ? Label::Real : Label::Fake;
      items.push_back(item);
    }
    const double ratio = 0.05 + 0.9 * rng::uniform01(eng);
    const auto [train, test] = split_labeled(items, ratio, eng());
    CHECK(train.size() + test.size() == n);
    std::set<std::string> seen;
    for (const auto& item : train) seen.insert(item.id);
    for (const auto& item : test) seen.insert(item.id);
    CHECK(seen.size() == n);  // disjoint and covering
  }
}

TEST_CASE("split membership keys on ids, not positions") {
  rng::Engine eng(5);
  std::vector<NewsItem> items;
  for (int i = 0; i < 12; ++i) {
    NewsItem item;
    item.id = "n" + std::to_string(i);
    item.text = "t";
    item.label = Label::Real;
    items.push_back(item);
  }
  auto shuffled = items;
  rng::shuffle(shuffled, eng);

  auto membership = [](const std::vector<NewsItem>& train) {
    std::set<std::string> ids;
    for (const auto& item : train) ids.insert(item.id);
    return ids;
  };
  const auto a = split_labeled(items, 0.75, 1234);
  const auto b = split_labeled(shuffled, 0.75, 1234);
  CHECK(membership(a.first) == membership(b.first));
  CHECK(membership(a.second) == membership(b.second));
}

TEST_SUITE_END();
