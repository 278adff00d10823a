#include <algorithm>
#include <vector>

#include <doctest.h>

#include "ecfm/eval.hpp"
#include "ecfm/pipeline.hpp"
#include "ecfm/rng.hpp"
#include "ecfm/synthgen.hpp"

using namespace ecfm;

namespace {

// Pairwise brute force with integer accounting: 2U = 2*wins + ties.
double brute_force_auc(const std::vector<double>& fakeness,
                       const std::vector<Label>& labels) {
  std::uint64_t wins = 0, ties = 0, n_fake = 0, n_real = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != Label::Fake) continue;
    ++n_fake;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != Label::Real) continue;
      if (fakeness[i] > fakeness[j]) ++wins;
      else if (fakeness[i] == fakeness[j]) ++ties;
    }
  }
  for (Label l : labels) {
    if (l == Label::Real) ++n_real;
  }
  return static_cast<double>(2 * wins + ties) /
         (2.0 * static_cast<double>(n_fake) * static_cast<double>(n_real));
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("perfect predictions score 1 on every metric") {
  const std::vector<Label> labels{Label::Fake, Label::Real, Label::Fake};
  const ConfusionMetrics m = confusion_metrics(labels, labels);
  CHECK(m.accuracy == 1.0);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == 1.0);
}

TEST_CASE("hand-counted confusion matrix") {
  // TP=2, FP=1, FN=1, TN=6 with Fake as the positive class.
  std::vector<Label> pred, truth;
  auto emit = [&](Label p, Label t, int count) {
    for (int i = 0; i < count; ++i) {
      pred.push_back(p);
      truth.push_back(t);
    }
  };
  emit(Label::Fake, Label::Fake, 2);
  emit(Label::Fake, Label::Real, 1);
  emit(Label::Real, Label::Fake, 1);
  emit(Label::Real, Label::Real, 6);
  const ConfusionMetrics m = confusion_metrics(pred, truth);
  CHECK(m.accuracy == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(m.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("all-real predictions on mixed labels zero out the rates") {
  const std::vector<Label> pred{Label::Real, Label::Real, Label::Real};
  const std::vector<Label> truth{Label::Fake, Label::Real, Label::Fake};
  const ConfusionMetrics m = confusion_metrics(pred, truth);
  CHECK(m.precision == 0.0);
  CHECK(m.zero_denominator_precision);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);
}

TEST_CASE("confusion metrics reject mismatched lengths") {
  CHECK_THROWS_AS(confusion_metrics({Label::Real}, {}), std::invalid_argument);
}

TEST_CASE("accuracy is invariant under joint permutation") {
  rng::Engine eng(3);
  std::vector<Label> pred, truth;
  for (int i = 0; i < 40; ++i) {
    pred.push_back(rng::bernoulli(eng, 0.5) ? Label::Real : Label::Fake);
    truth.push_back(rng::bernoulli(eng, 0.5) ? Label::Real : Label::Fake);
  }
  const double base = confusion_metrics(pred, truth).accuracy;
  std::vector<std::size_t> perm(pred.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng::shuffle(perm, eng);
  std::vector<Label> pred2, truth2;
  for (std::size_t i : perm) {
    pred2.push_back(pred[i]);
    truth2.push_back(truth[i]);
  }
  CHECK(confusion_metrics(pred2, truth2).accuracy == base);
}

TEST_CASE("auc of perfectly separated scores is 1") {
  const std::vector<double> fakeness{0.9, 0.8, 0.2, 0.1};
  const std::vector<Label> labels{Label::Fake, Label::Fake, Label::Real,
                                  Label::Real};
  CHECK(auc_roc(fakeness, labels) == 1.0);
}

TEST_CASE("auc of all-equal scores is one half") {
  const std::vector<double> fakeness{0.5, 0.5, 0.5, 0.5};
  const std::vector<Label> labels{Label::Fake, Label::Real, Label::Fake,
                                  Label::Real};
  CHECK(auc_roc(fakeness, labels) == 0.5);
}

TEST_CASE("hand-counted pairwise auc") {
  // Fake scores {0.6, 0.2}, Real scores {0.8, 0.4}: one win of four pairs.
  const std::vector<double> fakeness{0.6, 0.2, 0.8, 0.4};
  const std::vector<Label> labels{Label::Fake, Label::Fake, Label::Real,
                                  Label::Real};
  CHECK(auc_roc(fakeness, labels) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("auc rejects single-class inputs") {
  CHECK_THROWS_AS(auc_roc({0.1, 0.2}, {Label::Real, Label::Real}),
                  std::invalid_argument);
}

TEST_CASE("auc equals the pairwise brute force exactly") {
  rng::Engine eng(55);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng::uniform_below(eng, 199);
    std::vector<double> fakeness;
    std::vector<Label> labels;
    bool seen_fake = false, seen_real = false;
    for (std::size_t i = 0; i < n; ++i) {
      // Mix a coarse grid with fine values so tie groups appear often.
      fakeness.push_back(rng::bernoulli(eng, 0.5)
                             ? rng::uniform_below(eng, 6) / 6.0
                             : rng::uniform01(eng));
      const bool fake = rng::bernoulli(eng, 0.5);
      labels.push_back(fake ? Label::Fake : Label::Real);
      (fake ? seen_fake : seen_real) = true;
    }
    if (!seen_fake || !seen_real) continue;
    CAPTURE(trial);
    REQUIRE(auc_roc(fakeness, labels) == brute_force_auc(fakeness, labels));
  }
}

TEST_CASE("a one-point sweep reports the single run verbatim") {
  SynthConfig synth;
  synth.n_events = 20;
  synth.news_per_event = 5;
  synth.labeled_frac = 0.4;
  synth.seed = 33;
  const Dataset data = generate(synth).dataset;

  PipelineConfig cfg;
  cfg.updates = 3;
  cfg.characterizer = CharacterizerKind::Linear;
  cfg.learning_rate = 0.5;
  cfg.seed = 12;

  const auto rows = sweep_alpha({0.5}, 1, cfg, data);
  REQUIRE(rows.size() == 1);
  PipelineConfig direct = cfg;
  direct.alpha = 0.5;
  const Metrics want = run(direct, data).metrics;
  CHECK(rows[0].mean.accuracy == want.accuracy);
  CHECK(rows[0].mean.auc_roc == want.auc_roc);
  CHECK(rows[0].mean.f1 == want.f1);

  // Same base seed, same table.
  const auto again = sweep_alpha({0.5}, 1, cfg, data);
  CHECK(again[0].mean.accuracy == rows[0].mean.accuracy);

  CHECK_THROWS_AS(sweep_alpha({}, 1, cfg, data), std::invalid_argument);
  CHECK_THROWS_AS(sweep_alpha({0.5}, 0, cfg, data), std::invalid_argument);
}

TEST_CASE("report deltas are signed differences") {
  RunReport a, b;
  a.metrics.accuracy = 0.7668;
  b.metrics.accuracy = 0.6472;
  const MetricDeltas d = compare(a, b);
  CHECK(d.accuracy == doctest::Approx(0.1196).epsilon(1e-9));
  const MetricDeltas reversed = compare(b, a);
  CHECK(reversed.accuracy == -d.accuracy);
  CHECK(compare(a, a).accuracy == 0.0);
}

TEST_SUITE_END();
