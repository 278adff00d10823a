#pragma once

#include <cstdint>
#include <map>
#include <utility>

namespace ecfm {

// Scalar filter parameters shared by every event. Q and R are the prediction
// and observation noise covariances; B is the observation transition scalar.
struct KalmanParams {
  double q = 0.01;
  double r = 0.01;
  double b = 1.0;
  double p0 = 0.02;
  double c0 = 0.5;

  void validate() const;
  bool operator==(const KalmanParams&) const = default;
};

// Per-event filter state: corrected credibility, corrected error covariance,
// and the number of predict/correct steps applied so far.
struct EventCredState {
  std::int64_t event_id = 0;
  double c_hat = 0.5;
  double p_hat = 0.02;
  std::int64_t t = 0;

  bool operator==(const EventCredState&) const = default;
};

// Prediction step: credibility carries over unchanged (the noise enters only
// through the covariance), covariance grows by Q.
std::pair<double, double> predict(const EventCredState& state,
                                  const KalmanParams& params);

// Adaptive gain K = P_minus * B / (B * P_minus * B + R).
double kalman_gain(double p_minus, const KalmanParams& params);

// Correction step: blends the prediction with the observed event credibility
// via the adaptive gain. Throws on nonpositive prior covariance or an
// observation outside [0,1]. The update counter advances by one.
EventCredState correct(std::int64_t event_id, std::int64_t t_prev, double c,
                       double p_minus, double z, const KalmanParams& params);

// Runs predict-then-correct for every observed event, creating fresh states
// (c0, p0) on first sight. Unobserved events are untouched; events are
// independent, so the result does not depend on iteration order.
void update_all(std::map<std::int64_t, EventCredState>& states,
                const std::map<std::int64_t, double>& observations,
                const KalmanParams& params);

}  // namespace ecfm
