#include "ecfm/kalman.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace ecfm {

void KalmanParams::validate() const {
  if (!(q > 0.0)) throw std::invalid_argument("kalman: Q must be > 0");
  if (!(r > 0.0)) throw std::invalid_argument("kalman: R must be > 0");
  if (!(p0 > 0.0)) throw std::invalid_argument("kalman: P0 must be > 0");
  if (b == 0.0) throw std::invalid_argument("kalman: B must be nonzero");
}

std::pair<double, double> predict(const EventCredState& state,
                                  const KalmanParams& params) {
  return {state.c_hat, state.p_hat + params.q};
}

double kalman_gain(double p_minus, const KalmanParams& params) {
  return p_minus * params.b / (params.b * p_minus * params.b + params.r);
}

EventCredState correct(std::int64_t event_id, std::int64_t t_prev, double c,
                       double p_minus, double z, const KalmanParams& params) {
  if (!(p_minus > 0.0)) {
    throw std::invalid_argument("kalman: prior covariance must be > 0");
  }
  if (!(z >= 0.0 && z <= 1.0)) {
    throw std::invalid_argument("kalman: observation " + std::to_string(z) +
                                " outside [0,1] for event " +
                                std::to_string(event_id));
  }
  const double b = params.b;
  const double gain = kalman_gain(p_minus, params);
  EventCredState next;
  next.event_id = event_id;
  next.c_hat = c + gain * (z - b * c);
  next.p_hat = (1.0 - gain * b) * p_minus;
  next.t = t_prev + 1;
  // With B = 1 the correction is a convex combination of prediction and
  // observation, so the credibility stays in [0,1] without clamping.
  assert(b != 1.0 || (next.c_hat >= -1e-12 && next.c_hat <= 1.0 + 1e-12));
  return next;
}

void update_all(std::map<std::int64_t, EventCredState>& states,
                const std::map<std::int64_t, double>& observations,
                const KalmanParams& params) {
  params.validate();
  for (const auto& [event_id, z] : observations) {
    auto it = states.find(event_id);
    if (it == states.end()) {
      EventCredState fresh;
      fresh.event_id = event_id;
      fresh.c_hat = params.c0;
      fresh.p_hat = params.p0;
      fresh.t = 0;
      it = states.emplace(event_id, fresh).first;
    }
    const auto [c, p_minus] = predict(it->second, params);
    it->second = correct(event_id, it->second.t, c, p_minus, z, params);
  }
}

}  // namespace ecfm
