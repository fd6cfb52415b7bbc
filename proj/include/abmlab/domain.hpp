#pragma once

#include <cmath>

#include "abmlab/errors.hpp"

namespace abmlab {

// Spatial domain: the real line, or a circle of circumference L with
// positions kept in [0, L).
struct Domain {
  enum class Kind { Line, Torus };

  Kind kind = Kind::Line;
  double circumference = 0.0;

  static Domain line() { return Domain{Kind::Line, 0.0}; }
  static Domain torus(double L) {
    if (!(L > 0.0)) throw ValidationError("torus circumference must be positive");
    return Domain{Kind::Torus, L};
  }

  bool is_torus() const { return kind == Kind::Torus; }

  double wrap(double x) const {
    if (!is_torus()) return x;
    double w = std::fmod(x, circumference);
    if (w < 0.0) w += circumference;
    return w;
  }

  // Minimal arc distance between two points.
  double distance(double a, double b) const {
    double d = std::fabs(a - b);
    if (!is_torus()) return d;
    d = std::fmod(d, circumference);
    return std::min(d, circumference - d);
  }

  bool operator==(const Domain& o) const {
    return kind == o.kind && (!is_torus() || circumference == o.circumference);
  }
};

}  // namespace abmlab
