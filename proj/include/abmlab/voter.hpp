#pragma once

// The continuous-space voter model, realized two ways: the interface
// construction (a two-valued profile whose flip points move as annihilating
// particles, colored alternately) and the fixed-horizon dual construction
// (coalescing motions from the query points, one Bernoulli mark per
// surviving cluster).

#include <span>
#include <vector>

#include "abmlab/density_profile.hpp"
#include "abmlab/errors.hpp"
#include "abmlab/particles.hpp"
#include "abmlab/rng.hpp"

namespace abmlab {

struct VoterState {
  AnnihilatingState interfaces;
  int left_color = 0;  // line: value left of the interfaces; torus: value at arc 0
  double time = 0.0;

  int value_at(double x) const {
    const auto& bp = interfaces.positions;
    long cnt;
    if (interfaces.domain.is_torus()) {
      double w = interfaces.domain.wrap(x);
      // flips on the arc (0, w]
      cnt = static_cast<long>(std::upper_bound(bp.begin(), bp.end(), w) - bp.begin()) -
            static_cast<long>(std::upper_bound(bp.begin(), bp.end(), 0.0) - bp.begin());
    } else {
      cnt = static_cast<long>(std::upper_bound(bp.begin(), bp.end(), x) - bp.begin());
    }
    return (cnt % 2 == 0) ? left_color : 1 - left_color;
  }

  DensityProfile profile() const {
    DiscreteConfig cfg(interfaces.domain, interfaces.positions);
    return class_from_config(cfg, left_color);
  }
};

// Runs the interface construction from a two-valued profile. On the line the
// left color never changes (a vanishing arc is always bounded); on a torus
// the anchor color flips when an interface or a vanishing arc crosses 0.
inline std::vector<VoterState> voter_run_interface(const DensityProfile& u0, double horizon,
                                                   const StepScheme& scheme, RngStream& rng,
                                                   std::span<const double> snapshot_times = {}) {
  if (!u0.is_two_valued()) {
    throw NotTwoValued("voter_run_interface needs a {0,1}-valued profile");
  }
  if (!(horizon > 0.0)) throw ValidationError("voter_run_interface: horizon must be positive");
  auto snaps = detail::normalize_snapshots(horizon, snapshot_times);
  DiscreteConfig x0 = interface_of(u0);
  int color0 = u0.domain.is_torus() ? static_cast<int>(u0(0.0)) : static_cast<int>(u0.values.front());
  InteractingSystem sys(InteractingSystem::Mode::Annihilate, x0);
  std::vector<VoterState> out;
  double now = 0.0;
  for (double s : snaps) {
    sys.advance(s - now, scheme, rng);
    now = s;
    VoterState vs;
    vs.interfaces = sys.annihilating_state();
    vs.left_color = sys.anchor_flip_parity() ? 1 - color0 : color0;
    vs.time = s;
    out.push_back(std::move(vs));
  }
  return out;
}

struct MarkedEndpoints {
  std::vector<double> endpoints;       // surviving cluster positions, left to right
  std::vector<Block> clusters;         // initial-index ranges per cluster
  std::vector<int> marks;              // one Bernoulli mark per cluster
  std::vector<int> cluster_of_query;   // cluster index per query point
};

struct MarksResult {
  MarkedEndpoints endpoints;
  std::vector<int> bits;  // u_t(x_i) for each query point
};

// Fixed-horizon dual: coalescing motions from the query points for duration
// t, then one Bernoulli(u0(endpoint)) mark per surviving cluster, drawn in
// left-to-right cluster order. Coalesced queries share a mark.
inline MarksResult voter_marginal_marks(const DensityProfile& u0, double t,
                                        std::span<const double> query_points,
                                        const StepScheme& scheme, RngStream& rng) {
  if (!(t > 0.0)) throw ValidationError("voter_marginal_marks: t must be positive");
  DiscreteConfig x0(u0.domain, std::vector<double>(query_points.begin(), query_points.end()));
  InteractingSystem sys(InteractingSystem::Mode::Coalesce, x0);
  sys.advance(t, scheme, rng);
  CoalescingState state = sys.coalescing_state();

  MarksResult res;
  res.endpoints.endpoints = state.positions;
  res.endpoints.clusters = state.blocks;
  res.endpoints.marks.reserve(state.positions.size());
  for (std::size_t c = 0; c < state.positions.size(); ++c) {
    res.endpoints.marks.push_back(rng.bernoulli(u0(state.positions[c])) ? 1 : 0);
  }
  long n0 = state.initial_count;
  res.endpoints.cluster_of_query.assign(static_cast<std::size_t>(n0), -1);
  for (std::size_t c = 0; c < state.blocks.size(); ++c) {
    const Block& b = state.blocks[c];
    long w = block_width(b, n0);
    for (long k = 0; k < w; ++k) {
      long idx = (b.lo + k) % n0;
      res.endpoints.cluster_of_query[static_cast<std::size_t>(idx)] = static_cast<int>(c);
    }
  }
  res.bits.resize(static_cast<std::size_t>(n0));
  for (long q = 0; q < n0; ++q) {
    res.bits[static_cast<std::size_t>(q)] =
        res.endpoints.marks[static_cast<std::size_t>(res.endpoints.cluster_of_query[static_cast<std::size_t>(q)])];
  }
  return res;
}

// h_u(y1, y2): probability that independent Bernoulli(u) colors at y1 and y2
// disagree; for two-valued u this is the indicator {u(y1) != u(y2)}.
inline double match_indicator(const DensityProfile& u, double y1, double y2) {
  double a = u(y1);
  double b = u(y2);
  return a * (1.0 - b) + (1.0 - a) * b;
}

}  // namespace abmlab
