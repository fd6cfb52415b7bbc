#pragma once

// Duality identities as pairs of independent Monte Carlo estimators. Each
// identity equates a forward functional (interface simulation) with a dual
// one (coalescing motions plus marks); the harness estimates both sides on
// separate stream families and compares them with a z-test.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "abmlab/density_profile.hpp"
#include "abmlab/entrance.hpp"
#include "abmlab/estimate.hpp"
#include "abmlab/particles.hpp"
#include "abmlab/voter.hpp"

namespace abmlab {

enum class IdentityTag { Moment, Match, Border, Parity };

inline const char* identity_tag_name(IdentityTag t) {
  switch (t) {
    case IdentityTag::Moment: return "MOMENT";
    case IdentityTag::Match: return "MATCH";
    case IdentityTag::Border: return "BORDER";
    case IdentityTag::Parity: return "PARITY";
  }
  return "?";
}

struct DualityQuery {
  DensityProfile u;
  double t = 1.0;
  std::vector<double> xs;  // strictly increasing query points
  IdentityTag tag = IdentityTag::Moment;
  double mesh = 0.0;          // lattice-approximation mesh; 0 = auto
  double window_pad_k = 6.0;  // window exceeds the observation span by k*sqrt(t)
  StepScheme scheme{};

  void validate() const {
    if (!(t > 0.0)) throw ValidationError("duality query: t must be positive");
    if (xs.empty()) throw ValidationError("duality query: needs query points");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (!(xs[i] < xs[i + 1])) throw ValidationError("duality query: points must increase");
    }
    if ((tag == IdentityTag::Parity || tag == IdentityTag::Match) && xs.size() % 2 != 0) {
      throw ValidationError("interval identities need an even number of points");
    }
  }

  double auto_mesh() const {
    if (mesh > 0.0) return mesh;
    if (xs.size() >= 2) {
      double g = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) g = std::min(g, xs[i + 1] - xs[i]);
      return g / 64.0;
    }
    return std::sqrt(t) / 64.0;
  }

  Interval window() const {
    double pad = window_pad_k * std::sqrt(t);
    return Interval{xs.front() - pad, xs.back() + pad};
  }

  // Two-valued starting profile: the profile itself when it already is one,
  // otherwise its lattice approximation at the mesh over the window.
  DensityProfile start_profile() const {
    if (u.is_two_valued()) return u;
    return lattice_approximant(u, auto_mesh(), window());
  }
};

// E[prod_i u_t(x_i)] via the interface construction.
inline EstimateWithCI lhs_moment(const DualityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  DensityProfile start = q.start_profile();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/lhs_moment");
  return mc_estimate(p, [&](RngStream& stream, long) {
    auto states = voter_run_interface(start, q.t, q.scheme, stream);
    double prod = 1.0;
    for (double x : q.xs) prod *= static_cast<double>(states.back().value_at(x));
    return prod;
  });
}

// E[prod over surviving dual clusters of u(endpoint)].
inline EstimateWithCI rhs_moment(const DualityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/rhs_moment");
  return mc_estimate(p, [&](RngStream& stream, long) {
    DiscreteConfig x0(q.u.domain, q.xs);
    InteractingSystem sys(InteractingSystem::Mode::Coalesce, x0);
    sys.advance(q.t, q.scheme, stream);
    double prod = 1.0;
    for (double y : sys.positions()) prod *= q.u(y);
    return prod;
  });
}

// P(every interval [x_{2i-1}, x_{2i}] holds an even number of particles).
inline EstimateWithCI lhs_parity(const DualityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  DensityProfile start = q.start_profile();
  DiscreteConfig x0 = interface_of(start);
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/lhs_parity");
  return mc_estimate(p, [&](RngStream& stream, long) {
    auto states = abm_run(x0, q.t, q.scheme, stream);
    const AnnihilatingState& s = states.back();
    for (std::size_t i = 0; i + 1 < q.xs.size(); i += 2) {
      if (count_in(s, q.xs[i], q.xs[i + 1]) % 2 != 0) return 0.0;
    }
    return 1.0;
  });
}

// P(every query pair carries matching dual marks).
inline EstimateWithCI rhs_match(const DualityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/rhs_match");
  return mc_estimate(p, [&](RngStream& stream, long) {
    MarksResult marks = voter_marginal_marks(q.u, q.t, q.xs, q.scheme, stream);
    for (std::size_t i = 0; i + 1 < marks.bits.size(); i += 2) {
      if (marks.bits[i] != marks.bits[i + 1]) return 0.0;
    }
    return 1.0;
  });
}

struct DualityReport {
  DualityQuery query;
  Verdict result;
};

// Runs the estimator pair named by the query tag and compares.
inline DualityReport run_identity(const DualityQuery& q, const ReplicaPlan& plan, double alpha = 0.01) {
  DualityReport rep;
  rep.query = q;
  EstimateWithCI a, b;
  switch (q.tag) {
    case IdentityTag::Moment:
      a = lhs_moment(q, plan);
      b = rhs_moment(q, plan);
      break;
    case IdentityTag::Match:
    case IdentityTag::Border:
    case IdentityTag::Parity:
      a = lhs_parity(q, plan);
      b = rhs_match(q, plan);
      break;
  }
  rep.result = verdict(a, b, alpha);
  return rep;
}

}  // namespace abmlab
