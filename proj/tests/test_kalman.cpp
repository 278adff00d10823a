#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "ecfm/kalman.hpp"
#include "ecfm/rng.hpp"

using namespace ecfm;

namespace {

// Straight-line reference recursion, independent of the module under test.
struct ReferenceStep {
  double c_hat;
  double p_hat;
  double gain;
};

ReferenceStep reference_step(double c_prev, double p_prev, double z,
                             const KalmanParams& kp) {
  const double c_pred = c_prev;
  const double p_minus = p_prev + kp.q;
  const double k = p_minus * kp.b / (kp.b * p_minus * kp.b + kp.r);
  ReferenceStep out;
  out.c_hat = c_pred + k * (z - kp.b * c_pred);
  out.p_hat = (1.0 - k * kp.b) * p_minus;
  out.gain = k;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("kalman");

TEST_CASE("predict adds Q to the covariance and keeps the credibility") {
  KalmanParams kp;  // Q = R = 0.01, P0 = 0.02
  EventCredState s;
  s.c_hat = 0.5;
  s.p_hat = 0.02;
  const auto [c, p_minus] = predict(s, kp);
  CHECK(c == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p_minus == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("predict with Q = 0 leaves the covariance unchanged") {
  KalmanParams kp;
  kp.q = 0.0;
  EventCredState s;
  s.p_hat = 0.125;
  CHECK(predict(s, kp).second == 0.125);
}

TEST_CASE("prediction never moves the credibility") {
  rng::Engine eng(2);
  KalmanParams kp;
  for (int i = 0; i < 50; ++i) {
    EventCredState s;
    s.c_hat = rng::uniform01(eng);
    s.p_hat = 0.001 + rng::uniform01(eng);
    CHECK(predict(s, kp).first == s.c_hat);
  }
}

TEST_CASE("first correction with the default parameters") {
  KalmanParams kp;  // P0 0.02, Q 0.01, R 0.01, B 1
  const double p_minus = 0.02 + kp.q;
  CHECK(kalman_gain(p_minus, kp) == doctest::Approx(0.75).epsilon(1e-12));
  const EventCredState next = correct(0, 0, 0.5, p_minus, 0.9, kp);
  CHECK(next.c_hat == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(next.p_hat == doctest::Approx(0.0075).epsilon(1e-12));
  CHECK(next.t == 1);
}

TEST_CASE("zero innovation leaves the credibility in place") {
  KalmanParams kp;
  const EventCredState next = correct(0, 3, 0.42, 0.03, 0.42, kp);
  CHECK(next.c_hat == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(next.t == 4);
}

TEST_CASE("huge observation noise freezes the state") {
  KalmanParams kp;
  kp.r = 1e12;
  const EventCredState next = correct(0, 0, 0.3, 0.03, 1.0, kp);
  CHECK(std::abs(next.c_hat - 0.3) < 1e-9);
}

TEST_CASE("correct validates its inputs") {
  KalmanParams kp;
  CHECK_THROWS_AS(correct(0, 0, 0.5, 0.0, 0.5, kp), std::invalid_argument);
  CHECK_THROWS_AS(correct(0, 0, 0.5, -0.1, 0.5, kp), std::invalid_argument);
  CHECK_THROWS_AS(correct(0, 0, 0.5, 0.03, 1.5, kp), std::invalid_argument);
}

TEST_CASE("update_all on one event equals predict then correct") {
  KalmanParams kp;
  std::map<std::int64_t, EventCredState> states;
  update_all(states, {{9, 0.9}}, kp);
  REQUIRE(states.count(9) == 1);
  const EventCredState& s = states.at(9);
  CHECK(s.c_hat == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(s.p_hat == doctest::Approx(0.0075).epsilon(1e-12));
  CHECK(s.t == 1);
}

TEST_CASE("update_all with no observations is a no-op") {
  KalmanParams kp;
  std::map<std::int64_t, EventCredState> states;
  update_all(states, {{1, 0.2}}, kp);
  const auto before = states;
  update_all(states, {}, kp);
  CHECK(states == before);
}

TEST_CASE("update_all is independent of event enumeration order") {
  KalmanParams kp;
  std::map<std::int64_t, EventCredState> a, b;
  update_all(a, {{1, 0.2}, {2, 0.9}}, kp);
  std::map<std::int64_t, double> obs;
  obs.emplace(2, 0.9);
  obs.emplace(1, 0.2);
  update_all(b, obs, kp);
  CHECK(a == b);
  CHECK(a.at(1).c_hat != a.at(2).c_hat);
}

TEST_CASE("update_all rejects observations outside [0,1] naming the event") {
  KalmanParams kp;
  std::map<std::int64_t, EventCredState> states;
  CHECK_THROWS_WITH_AS(update_all(states, {{77, 1.25}}, kp),
                       doctest::Contains("77"), std::invalid_argument);
}

TEST_CASE("trajectories match the straight-line recursion") {
  rng::Engine eng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    KalmanParams kp;
    kp.q = 1e-4 + rng::uniform01(eng) * 0.5;
    kp.r = 1e-4 + rng::uniform01(eng) * 0.5;
    kp.p0 = 1e-4 + rng::uniform01(eng) * 0.5;
    kp.c0 = rng::uniform01(eng);
    kp.b = 1.0;

    std::map<std::int64_t, EventCredState> states;
    double ref_c = kp.c0;
    double ref_p = kp.p0;
    const int steps = 1 + static_cast<int>(rng::uniform_below(eng, 25));
    for (int step = 0; step < steps; ++step) {
      const double z = rng::uniform01(eng);
      update_all(states, {{0, z}}, kp);
      const ReferenceStep ref = reference_step(ref_c, ref_p, z, kp);
      ref_c = ref.c_hat;
      ref_p = ref.p_hat;
      REQUIRE(std::abs(states.at(0).c_hat - ref_c) < 1e-12);
      REQUIRE(std::abs(states.at(0).p_hat - ref_p) < 1e-12);
      REQUIRE(states.at(0).t == step + 1);
    }
  }
}

TEST_CASE("gain converges to the golden-ratio fixed point with Q = R") {
  KalmanParams kp;  // Q = R = 0.01
  EventCredState s;
  s.c_hat = kp.c0;
  s.p_hat = kp.p0;
  double gain = 0.0;
  for (int t = 1; t <= 40; ++t) {
    const auto [c, p_minus] = predict(s, kp);
    gain = kalman_gain(p_minus, kp);
    s = correct(0, s.t, c, p_minus, 0.5, kp);
  }
  CHECK(std::abs(gain - 0.6180339887) < 1e-6);
}

TEST_CASE("constant observations contract the error monotonically") {
  KalmanParams kp;
  EventCredState s;
  s.c_hat = 0.0;
  s.p_hat = kp.p0;
  double prev_err = 1.0;
  bool reached = false;
  for (int t = 1; t <= 10; ++t) {
    const auto [c, p_minus] = predict(s, kp);
    s = correct(0, s.t, c, p_minus, 1.0, kp);
    const double err = std::abs(s.c_hat - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
    if (err < 1e-3) reached = true;
  }
  CHECK(reached);
}

TEST_CASE("covariance converges monotonically to the steady state") {
  KalmanParams kp;
  const double steady = kp.q * (std::sqrt(5.0) - 1.0) / 2.0;
  for (double p0 : {1e-4, 0.0061, 0.02, 0.5, 10.0}) {
    EventCredState s;
    s.p_hat = p0;
    double prev_gap = std::abs(p0 - steady);
    for (int t = 0; t < 60; ++t) {
      const auto [c, p_minus] = predict(s, kp);
      s = correct(0, s.t, c, p_minus, 0.5, kp);
      CHECK(s.p_hat > 0.0);
      const double gap = std::abs(s.p_hat - steady);
      CHECK(gap <= prev_gap + 1e-15);
      prev_gap = gap;
    }
    CHECK(prev_gap < 1e-9);
  }
}

TEST_SUITE_END();
