#pragma once

// Monte Carlo estimates with confidence information, plus the two-sided
// z-test used to compare independent estimators.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "abmlab/parallel.hpp"
#include "abmlab/stats.hpp"

namespace abmlab {

struct SeedProvenance {
  std::uint64_t root_seed = 0;
  std::string experiment;
};

struct EstimateWithCI {
  double mean = 0.0;
  double std_error = 0.0;
  long replicas = 0;
  SeedProvenance seed;

  static EstimateWithCI exact(double value, const SeedProvenance& seed = {}) {
    return EstimateWithCI{value, 0.0, 1, seed};
  }
};

inline EstimateWithCI estimate_from_values(std::span<const double> values,
                                           const ReplicaPlan& plan) {
  RunningMoments acc;
  for (double v : values) acc.add(v);
  EstimateWithCI e;
  e.mean = acc.mean();
  e.std_error = acc.std_error();
  e.replicas = acc.count();
  e.seed = SeedProvenance{plan.root_seed, plan.experiment};
  return e;
}

// Convenience: one scalar per replica -> estimate.
template <typename Fn>
EstimateWithCI mc_estimate(const ReplicaPlan& plan, Fn&& fn) {
  auto values = replica_values(plan, std::forward<Fn>(fn));
  return estimate_from_values(values, plan);
}

inline double pooled_std_error(const EstimateWithCI& a, const EstimateWithCI& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

struct Verdict {
  EstimateWithCI lhs;
  EstimateWithCI rhs;
  double z = 0.0;
  double alpha = 0.01;
  bool pass = false;
};

// Two-sided z-test on lhs.mean - rhs.mean with pooled standard error.
inline Verdict verdict(const EstimateWithCI& a, const EstimateWithCI& b, double alpha = 0.01) {
  Verdict v;
  v.lhs = a;
  v.rhs = b;
  v.alpha = alpha;
  double se = pooled_std_error(a, b);
  if (se == 0.0) {
    v.z = (a.mean == b.mean) ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    v.z = (a.mean - b.mean) / se;
  }
  double zcrit = normal_quantile(1.0 - alpha / 2.0);
  v.pass = std::fabs(v.z) <= zcrit;
  return v;
}

}  // namespace abmlab
