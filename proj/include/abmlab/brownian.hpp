#pragma once

// Closed-form Brownian pair laws and exact samplers. Two independent unit
// Brownian motions are tracked through their gap, which diffuses at rate 2;
// collision corrections, survival probabilities and the conditioned
// non-colliding law all come from that reduction.

#include <cmath>
#include <utility>

#include "abmlab/errors.hpp"
#include "abmlab/rng.hpp"
#include "abmlab/stats.hpp"

namespace abmlab {

// Probability that the gap between two unit BMs hits zero within a step,
// given the gap a at the start and b at the end. The gap is a rate-2 BM, so
// the bridge-minimum formula gives exp(-2ab/(2 dt)) = exp(-a b / dt).
inline double bridge_cross_prob(double a, double b, double dt) {
  if (!(dt > 0.0)) throw NonPositiveDt("bridge_cross_prob: dt must be positive");
  if (a <= 0.0 || b <= 0.0) return 1.0;
  return std::exp(-a * b / dt);
}

struct PairLaw {
  double t = 1.0;  // horizon
  double d = 1.0;  // initial separation

  PairLaw(double t_, double d_) : t(t_), d(d_) {
    if (!(t > 0.0)) throw ValidationError("PairLaw: t must be positive");
    if (d < 0.0) throw ValidationError("PairLaw: separation must be nonnegative");
  }
};

// P(tau > t) for the collision time tau of two unit BMs started d apart.
inline double pair_survival_prob(const PairLaw& law) {
  if (law.d <= 0.0) return 0.0;
  return 2.0 * normal_cdf(law.d / std::sqrt(2.0 * law.t)) - 1.0;
}

// Exact sample of tau: the first passage of a rate-2 BM from d to 0,
// d^2 / (2 Z^2) with Z standard normal (Levy law, time-changed).
inline double pair_meeting_time(double d, RngStream& stream) {
  if (!(d > 0.0)) throw ValidationError("pair_meeting_time: d must be positive");
  double z = stream.gaussian();
  return d * d / (2.0 * z * z);
}

// Density of two Brownian motions started together and conditioned not to
// collide on [0,t], evaluated at their time-t positions (y1 < y2).
inline double noncolliding_pair_density(double y1, double y2, double t) {
  if (!(t > 0.0)) throw ValidationError("noncolliding_pair_density: t must be positive");
  if (!(y1 < y2)) return 0.0;
  double norm2 = y1 * y1 + y2 * y2;
  return (y2 - y1) / (2.0 * std::pow(t, 1.5) * std::sqrt(M_PI)) * std::exp(-norm2 / (2.0 * t));
}

// Exact sample from the conditioned pair law via the orthogonal split
// s=(y1+y2)/sqrt(2) ~ N(0,t), r=(y2-y1)/sqrt(2) ~ Rayleigh(sqrt(t)).
inline std::pair<double, double> noncolliding_pair(double t, RngStream& stream) {
  if (!(t > 0.0)) throw ValidationError("noncolliding_pair: t must be positive");
  double s = std::sqrt(t) * stream.gaussian();
  double r = std::sqrt(t) * std::sqrt(-2.0 * std::log(stream.uniform()));
  double inv = 1.0 / std::sqrt(2.0);
  return {(s - r) * inv, (s + r) * inv};
}

}  // namespace abmlab
