#pragma once

// Piecewise-constant density profiles with values in [0,1], their
// two-valued subfamily with a discrete interface, and the interface
// operator linking profiles to point configurations.
//
// Line profiles: k breakpoints and k+1 interval values, the outer two being
// the tail values. Torus profiles: k breakpoints and k values, values[i]
// living on the arc from breakpoints[i] to the next breakpoint (cyclically);
// a constant torus profile has no breakpoints and a single value.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "abmlab/discrete_config.hpp"
#include "abmlab/domain.hpp"
#include "abmlab/errors.hpp"
#include "abmlab/test_function.hpp"

namespace abmlab {

struct DensityProfile {
  Domain domain = Domain::line();
  std::vector<double> breakpoints;
  std::vector<double> values;

  DensityProfile() : values{0.0} {}

  DensityProfile(Domain d, std::vector<double> bp, std::vector<double> vals)
      : domain(d), breakpoints(std::move(bp)), values(std::move(vals)) {
    validate();
    canonicalize();
  }

  static DensityProfile constant(double lambda, Domain d = Domain::line()) {
    return DensityProfile(d, {}, {lambda});
  }

  // Indicator of (-inf, 0), the profile of a single interface at the origin.
  static DensityProfile left_indicator() {
    return DensityProfile(Domain::line(), {0.0}, {1.0, 0.0});
  }

  void validate() const {
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      if (!(breakpoints[i] < breakpoints[i + 1])) {
        throw ValidationError("profile breakpoints must be strictly increasing");
      }
    }
    for (double v : values) {
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("profile values must lie in [0,1]");
    }
    if (domain.is_torus()) {
      for (double b : breakpoints) {
        if (b < 0.0 || b >= domain.circumference) {
          throw ValidationError("torus breakpoints must lie in [0, L)");
        }
      }
      std::size_t want = breakpoints.empty() ? 1 : breakpoints.size();
      if (values.size() != want) throw ValidationError("torus profile needs one value per arc");
    } else {
      if (values.size() != breakpoints.size() + 1) {
        throw ValidationError("line profile needs breakpoints+1 values");
      }
    }
  }

  // Merge adjacent intervals with equal values.
  void canonicalize() {
    if (domain.is_torus()) {
      // breakpoints[j] separates values[j-1] (cyclically) from values[j].
      bool changed = true;
      while (changed && breakpoints.size() > 1) {
        changed = false;
        std::size_t k = breakpoints.size();
        for (std::size_t j = 0; j < k; ++j) {
          std::size_t prev = (j + k - 1) % k;
          if (values[prev] == values[j]) {
            breakpoints.erase(breakpoints.begin() + static_cast<long>(j));
            values.erase(values.begin() + static_cast<long>(j));
            changed = true;
            break;
          }
        }
      }
      if (breakpoints.size() == 1) {
        // a lone breakpoint separates the wrapping arc from itself
        breakpoints.clear();
        values.resize(1);
      }
    } else {
      for (std::size_t j = 0; j < breakpoints.size();) {
        if (values[j] == values[j + 1]) {
          breakpoints.erase(breakpoints.begin() + static_cast<long>(j));
          values.erase(values.begin() + static_cast<long>(j) + 1);
        } else {
          ++j;
        }
      }
    }
  }

  // Value at x; intervals are right-continuous, [b_i, b_{i+1}).
  double operator()(double x) const {
    if (domain.is_torus()) {
      if (breakpoints.empty()) return values[0];
      double w = domain.wrap(x);
      auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), w);
      std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin());
      // before the first breakpoint we are on the wrapping arc
      return values[(idx + breakpoints.size() - 1) % breakpoints.size()];
    }
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return values[static_cast<std::size_t>(it - breakpoints.begin())];
  }

  bool is_two_valued() const {
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
  }

  bool is_constant() const { return breakpoints.empty(); }

  DensityProfile flipped() const {
    DensityProfile f = *this;
    for (double& v : f.values) v = 1.0 - v;
    return f;
  }

  bool operator==(const DensityProfile& o) const {
    return domain == o.domain && breakpoints == o.breakpoints && values == o.values;
  }
};

// Flip points of a two-valued profile. The interface of u and of 1-u agree.
inline DiscreteConfig interface_of(const DensityProfile& u) {
  if (!u.is_two_valued()) {
    throw NotTwoValued("interface_of requires a {0,1}-valued profile");
  }
  // canonical form guarantees every breakpoint is a flip point
  return DiscreteConfig(u.domain, u.breakpoints);
}

// Inverse interface operator: the alternating two-valued profile across the
// points of x whose leftmost (line) or anchor-arc (torus) value is left_value.
inline DensityProfile class_from_config(const DiscreteConfig& x, int left_value) {
  double v0 = left_value ? 1.0 : 0.0;
  if (x.domain.is_torus()) {
    if (x.size() % 2 != 0) {
      throw OddCountOnTorus("torus interface configs need an even point count");
    }
    if (x.empty()) return DensityProfile::constant(v0, x.domain);
    std::size_t k = x.size();
    std::vector<double> vals(k);
    // left_value is the value at arc position 0. If the first breakpoint sits
    // at 0, the value on [b_0, b_1) is left_value; otherwise 0 lies on the
    // wrapping arc [b_{k-1}, b_0), which carries values[k-1].
    std::size_t anchor = (x.positions.front() == 0.0) ? 0 : k - 1;
    for (std::size_t i = 0; i < k; ++i) {
      vals[i] = (((i + k) - anchor) % 2 == 0) ? v0 : 1.0 - v0;
    }
    return DensityProfile(x.domain, x.positions, vals);
  }
  std::vector<double> vals(x.size() + 1);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vals[i] = (i % 2 == 0) ? v0 : 1.0 - v0;
  }
  return DensityProfile(x.domain, x.positions, vals);
}

// Equivalence class {u, 1-u} with a deterministic canonical representative:
// the lexicographically smaller of the two value sequences.
struct DensityClass {
  DensityProfile representative;

  static DensityClass of(const DensityProfile& u) {
    DensityProfile f = u.flipped();
    DensityClass c;
    c.representative = std::lexicographical_compare(f.values.begin(), f.values.end(),
                                                    u.values.begin(), u.values.end())
                           ? f
                           : u;
    return c;
  }

  bool operator==(const DensityClass& o) const { return representative == o.representative; }
};

// Exact pairing <u, phi> = int u(x) phi(x) dx for a compactly supported
// piecewise-linear phi. Piecewise-constant times piecewise-linear integrates
// in closed form.
inline double vague_pairing(const DensityProfile& u, const TestFunction& phi) {
  if (u.domain.is_torus()) {
    throw ValidationError("vague_pairing is defined for line profiles");
  }
  double lo = phi.support_lo();
  double hi = phi.support_hi();
  std::vector<double> cuts{lo};
  for (double b : u.breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    total += u(mid) * phi.integral(cuts[i], cuts[i + 1]);
  }
  return total;
}

}  // namespace abmlab
