#pragma once

// Finite discrete point configurations: the states annihilating systems
// start from and end in. Positions are strictly increasing; on a torus they
// live in [0, L).

#include <algorithm>
#include <span>
#include <vector>

#include "abmlab/domain.hpp"
#include "abmlab/errors.hpp"

namespace abmlab {

struct DiscreteConfig {
  Domain domain = Domain::line();
  std::vector<double> positions;

  DiscreteConfig() = default;
  DiscreteConfig(Domain d, std::vector<double> pos) : domain(d), positions(std::move(pos)) {
    validate();
  }

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  void validate() const {
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
      if (!(positions[i] < positions[i + 1])) {
        throw ValidationError("config positions must be strictly increasing");
      }
    }
    if (domain.is_torus()) {
      for (double p : positions) {
        if (p < 0.0 || p >= domain.circumference) {
          throw ValidationError("torus positions must lie in [0, L)");
        }
      }
    }
  }
};

// Number of points of a sorted sequence inside the closed interval [a, b].
inline long count_in(std::span<const double> sorted, double a, double b) {
  if (b < a) return 0;
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), a);
  auto hi = std::upper_bound(sorted.begin(), sorted.end(), b);
  return static_cast<long>(hi - lo);
}

inline bool parity_in_even(std::span<const double> sorted, double a, double b) {
  return count_in(sorted, a, b) % 2 == 0;
}

inline long count_in(const DiscreteConfig& c, double a, double b) {
  return count_in(std::span<const double>(c.positions), a, b);
}

}  // namespace abmlab
