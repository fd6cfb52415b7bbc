#pragma once

// Entrance-family generators: increasingly dense starting configurations
// whose induced classes converge (or fail to converge) as the mesh refines,
// plus the lattice approximation of arbitrary profiles and the exact
// vague-convergence checker.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "abmlab/density_profile.hpp"
#include "abmlab/discrete_config.hpp"
#include "abmlab/errors.hpp"
#include "abmlab/rng.hpp"
#include "abmlab/test_function.hpp"

namespace abmlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

enum class EntranceKind { Lattice, Paired, Quarter, Poisson };

inline const char* entrance_kind_name(EntranceKind k) {
  switch (k) {
    case EntranceKind::Lattice: return "lattice";
    case EntranceKind::Paired: return "paired";
    case EntranceKind::Quarter: return "quarter";
    case EntranceKind::Poisson: return "poisson";
  }
  return "?";
}

namespace detail {

inline std::vector<double> offset_lattice(int n, Interval window, double offset) {
  // points k/n + offset inside [lo, hi], k integer
  std::vector<double> pts;
  double nn = static_cast<double>(n);
  long k0 = static_cast<long>(std::ceil((window.lo - offset) * nn - 1e-9));
  long k1 = static_cast<long>(std::floor((window.hi - offset) * nn + 1e-9));
  for (long k = k0; k <= k1; ++k) {
    pts.push_back(static_cast<double>(k) / nn + offset);
  }
  return pts;
}

}  // namespace detail

// Deterministic and Poisson starting families on a window. The Poisson kind
// needs a stream; the deterministic kinds ignore it.
inline DiscreteConfig entrance_family(EntranceKind kind, int n, Interval window,
                                      double alpha = 2.0, RngStream* stream = nullptr,
                                      Domain domain = Domain::line()) {
  if (n < 1) throw ValidationError("entrance_family: n must be >= 1");
  if (!(window.lo < window.hi)) throw ValidationError("entrance_family: empty window");
  std::vector<double> pts;
  switch (kind) {
    case EntranceKind::Lattice:
      pts = detail::offset_lattice(n, window, 0.0);
      break;
    case EntranceKind::Paired: {
      if (!(alpha > 1.0)) throw BadAlpha("paired family requires alpha > 1");
      double delta = std::pow(static_cast<double>(n), -alpha);
      pts = detail::offset_lattice(n, window, 0.0);
      auto shifted = detail::offset_lattice(n, window, delta);
      pts.insert(pts.end(), shifted.begin(), shifted.end());
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      break;
    }
    case EntranceKind::Quarter: {
      double delta = 1.0 / (4.0 * static_cast<double>(n));
      pts = detail::offset_lattice(n, window, 0.0);
      auto shifted = detail::offset_lattice(n, window, delta);
      pts.insert(pts.end(), shifted.begin(), shifted.end());
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      break;
    }
    case EntranceKind::Poisson: {
      if (stream == nullptr) throw ValidationError("poisson family needs a stream");
      long count = stream->poisson(static_cast<double>(n) * window.length());
      pts.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) pts.push_back(stream->uniform(window.lo, window.hi));
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      break;
    }
  }
  return DiscreteConfig(domain, std::move(pts));
}

// Two-valued lattice approximation of an arbitrary profile at mesh h on a
// window: each mesh cell carries its local mass at the left end of the cell,
// so pairings converge to those of u at rate O(h).
inline DensityProfile lattice_approximant(const DensityProfile& u, double h, Interval window) {
  if (!(h > 0.0)) throw ValidationError("lattice_approximant: mesh must be positive");
  if (u.domain.is_torus()) throw ValidationError("lattice_approximant: line profiles only");
  long cells = static_cast<long>(std::ceil(window.length() / h - 1e-9));
  std::vector<double> bp;
  std::vector<double> vals{0.0};
  auto push_one_interval = [&](double lo, double hi) {
    // extend the previous interval when contiguous
    if (!bp.empty() && vals.back() == 0.0 && bp.back() == lo && vals[vals.size() - 2] == 1.0) {
      bp.back() = hi;
      return;
    }
    bp.push_back(lo);
    vals.push_back(1.0);
    bp.push_back(hi);
    vals.push_back(0.0);
  };
  for (long k = 0; k < cells; ++k) {
    double lo = window.lo + static_cast<double>(k) * h;
    double hi = std::min(window.lo + static_cast<double>(k + 1) * h, window.hi);
    if (hi <= lo) break;
    double mean = 0.0;
    {
      // exact mean of the piecewise-constant u over the cell
      std::vector<double> cuts{lo};
      for (double b : u.breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
      }
      cuts.push_back(hi);
      double mass = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        mass += u(0.5 * (cuts[i] + cuts[i + 1])) * (cuts[i + 1] - cuts[i]);
      }
      mean = mass / (hi - lo);
    }
    if (mean <= 1e-12) continue;
    if (mean >= 1.0 - 1e-12) {
      push_one_interval(lo, hi);
    } else {
      push_one_interval(lo, lo + mean * (hi - lo));
    }
  }
  return DensityProfile(Domain::line(), std::move(bp), std::move(vals));
}

struct VagueLimitReport {
  EntranceKind kind = EntranceKind::Lattice;
  double lambda_limit = 0.0;
  double phi_integral = 0.0;
  std::vector<int> ns;
  std::vector<double> gaps;  // |<u_n, phi> - lambda * int(phi)| per n
  double tolerance = 0.0;
  bool converged = false;
};

// Exact pairing gaps along a deterministic entrance family. The window is
// aligned to the base lattice so each family's canonical representative is
// the one converging to the stated limit.
inline VagueLimitReport vague_limit_check(EntranceKind kind, const TestFunction& phi,
                                          double lambda_limit, std::span<const int> ns,
                                          double tolerance, double alpha = 2.0) {
  if (kind == EntranceKind::Poisson) {
    throw ValidationError("vague_limit_check covers the deterministic families");
  }
  VagueLimitReport rep;
  rep.kind = kind;
  rep.lambda_limit = lambda_limit;
  rep.phi_integral = phi.integral();
  rep.tolerance = tolerance;
  double target = lambda_limit * rep.phi_integral;
  for (int n : ns) {
    double nn = static_cast<double>(n);
    Interval window{std::floor((phi.support_lo() - 1.0) * nn) / nn, phi.support_hi() + 1.0};
    DiscreteConfig cfg = entrance_family(kind, n, window, alpha);
    DensityProfile u = class_from_config(cfg, 0);
    rep.ns.push_back(n);
    rep.gaps.push_back(std::fabs(vague_pairing(u, phi) - target));
  }
  rep.converged = !rep.gaps.empty() && rep.gaps.back() <= tolerance;
  return rep;
}

}  // namespace abmlab
