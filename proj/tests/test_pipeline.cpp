#include <cmath>

#include <doctest.h>

#include "ecfm/pipeline.hpp"
#include "ecfm/selector.hpp"
#include "ecfm/synthgen.hpp"
#include "helpers.hpp"

using namespace ecfm;

namespace {

Dataset small_corpus(std::uint64_t seed = 100, double purity = 1.0) {
  SynthConfig cfg;
  cfg.n_events = 30;
  cfg.news_per_event = 6;
  cfg.labeled_frac = 0.3;
  cfg.purity = purity;
  cfg.shared_tokens = 30;
  cfg.class_tokens = 8;
  cfg.tokens_per_news = 8;
  cfg.seed = seed;
  return generate(cfg).dataset;
}

PipelineConfig fast_config() {
  PipelineConfig cfg;
  cfg.updates = 6;
  cfg.characterizer = CharacterizerKind::Linear;
  cfg.learning_rate = 0.5;
  cfg.batch_size = 16;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("a run emits one log per update with the scheduled selection") {
  const Dataset data = small_corpus();
  const PipelineConfig cfg = fast_config();
  const RunReport report = run(cfg, data);
  REQUIRE(report.epoch_logs.size() == 6);

  const std::size_t pool = data.indices_of(Split::Unlabeled).size();
  for (const EpochLog& log : report.epoch_logs) {
    CHECK(log.selected_count ==
          static_cast<int>(scheduled_count(log.t, pool)));
    CHECK(log.positive_fraction >= 0.0);
    CHECK(log.positive_fraction <= 1.0);
  }
}

TEST_CASE("updates=1 selects two percent of the pool, rounded up") {
  const Dataset data = small_corpus();
  PipelineConfig cfg = fast_config();
  cfg.updates = 1;
  const RunReport report = run(cfg, data);
  REQUIRE(report.epoch_logs.size() == 1);
  const std::size_t pool = data.indices_of(Split::Unlabeled).size();
  CHECK(report.epoch_logs[0].selected_count ==
        static_cast<int>((pool * 2 + 99) / 100));
}

TEST_CASE("alpha=1 ECFM matches ECFM-minus everywhere but the digest") {
  const Dataset data = small_corpus();
  PipelineConfig a = fast_config();
  a.alpha = 1.0;
  a.mode = Mode::Ecfm;
  PipelineConfig b = a;
  b.mode = Mode::EcfmMinus;

  const RunReport ra = run(a, data);
  const RunReport rb = run(b, data);
  REQUIRE(ra.epoch_logs.size() == rb.epoch_logs.size());
  for (std::size_t i = 0; i < ra.epoch_logs.size(); ++i) {
    CHECK(ra.epoch_logs[i].t == rb.epoch_logs[i].t);
    CHECK(ra.epoch_logs[i].positive_fraction ==
          rb.epoch_logs[i].positive_fraction);
    CHECK(ra.epoch_logs[i].dt == rb.epoch_logs[i].dt);
    CHECK(ra.epoch_logs[i].selected_count == rb.epoch_logs[i].selected_count);
    CHECK(ra.epoch_logs[i].labeled_loss == rb.epoch_logs[i].labeled_loss);
    CHECK(ra.epoch_logs[i].pseudo_loss == rb.epoch_logs[i].pseudo_loss);
  }
  CHECK(ra.metrics == rb.metrics);
}

TEST_CASE("an empty unlabeled pool degenerates to supervised training") {
  std::vector<NewsItem> items;
  rng::Engine eng(1);
  for (int i = 0; i < 24; ++i) {
    NewsItem item;
    item.id = "n" + std::to_string(i);
    item.text = (i % 2 ? "genuine report details" : "fabricated hoax claim");
    item.label = i % 2 ? Label::Real : Label::Fake;
    item.event_id = i % 6;
    item.split = i < 20 ? Split::Train : Split::Test;
    items.push_back(item);
  }
  PipelineConfig cfg = fast_config();
  cfg.updates = 3;
  const RunReport report = run(cfg, Dataset::from_items(items));
  REQUIRE(report.epoch_logs.size() == 3);
  for (const EpochLog& log : report.epoch_logs) {
    CHECK(log.selected_count == 0);
    CHECK(log.positive_fraction == 0.0);
  }
  CHECK(report.metrics.accuracy >= 0.0);
}

TEST_CASE("single-class labeled sets are rejected") {
  std::vector<NewsItem> items;
  for (int i = 0; i < 6; ++i) {
    NewsItem item;
    item.id = "n" + std::to_string(i);
    item.text = "text body";
    item.label = Label::Real;
    item.event_id = 0;
    item.split = Split::Train;
    items.push_back(item);
  }
  CHECK_THROWS_AS(PipelineRun(fast_config(), Dataset::from_items(items)),
                  std::runtime_error);
}

TEST_CASE("missing event ids point the user at cluster") {
  std::vector<NewsItem> items;
  for (int i = 0; i < 4; ++i) {
    NewsItem item;
    item.id = "n" + std::to_string(i);
    item.text = "text body";
    item.label = i % 2 ? Label::Real : Label::Fake;
    item.split = Split::Train;
    items.push_back(item);
  }
  CHECK_THROWS_WITH_AS(PipelineRun(fast_config(), Dataset::from_items(items)),
                       doctest::Contains("cluster"), std::runtime_error);
}

TEST_CASE("identical configs and seeds give byte-identical reports") {
  const Dataset data = small_corpus();
  const PipelineConfig cfg = fast_config();
  const RunReport a = run(cfg, data);
  const RunReport b = run(cfg, data);
  CHECK(a.canonical_dump() == b.canonical_dump());
}

TEST_CASE("checkpoint and resume reproduce the straight-through run") {
  testutil::TempDir dir;
  const Dataset data = small_corpus();
  const PipelineConfig cfg = fast_config();

  const RunReport straight = run(cfg, data);

  PipelineRun pr(cfg, data);
  for (int i = 0; i < 3; ++i) pr.step();
  pr.checkpoint(dir.file("mid.ckpt"));

  PipelineRun resumed = PipelineRun::resume(dir.file("mid.ckpt"));
  CHECK(resumed.completed_updates() == 3);
  while (!resumed.done()) resumed.step();
  CHECK(resumed.finish().canonical_dump() == straight.canonical_dump());
}

TEST_CASE("checkpointing twice without stepping is byte-identical") {
  testutil::TempDir dir;
  PipelineRun pr(fast_config(), small_corpus());
  pr.step();
  pr.checkpoint(dir.file("a.ckpt"));
  pr.checkpoint(dir.file("b.ckpt"));
  CHECK(testutil::read_file(dir.file("a.ckpt")) ==
        testutil::read_file(dir.file("b.ckpt")));
}

TEST_CASE("resume rejects corrupt checkpoints") {
  testutil::TempDir dir;
  testutil::write_lines(dir.file("bad.ckpt"), {"{{{"});
  CHECK_THROWS_AS(PipelineRun::resume(dir.file("bad.ckpt")),
                  std::runtime_error);
}

TEST_CASE("a separable pure-event corpus reaches perfect test accuracy") {
  PipelineConfig cfg = fast_config();
  cfg.updates = 25;
  const RunReport report = run(cfg, small_corpus(321));
  CHECK(report.metrics.accuracy == 1.0);
}

TEST_CASE("finish before any update is an error") {
  PipelineRun pr(fast_config(), small_corpus());
  CHECK_THROWS_AS(pr.finish(), std::logic_error);
}

TEST_SUITE_END();
