#pragma once

// n-point and thinned density estimators with their closed-form evaluators.
// Monte Carlo routes estimate window-hit probabilities normalized by the
// window size, evaluated on a decreasing epsilon sequence and extrapolated
// linearly to epsilon -> 0; the quadrature route evaluates the exact 1-point
// density integral.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "abmlab/brownian.hpp"
#include "abmlab/density_profile.hpp"
#include "abmlab/entrance.hpp"
#include "abmlab/estimate.hpp"
#include "abmlab/particles.hpp"
#include "abmlab/quadrature.hpp"
#include "abmlab/voter.hpp"

namespace abmlab {

struct DensityQuery {
  DensityProfile u;
  double t = 1.0;
  std::vector<double> xs;         // strictly increasing
  std::vector<double> epsilons;   // decreasing window half-widths
  double mesh = 0.0;              // lattice-approximation mesh; 0 = auto
  double window_pad_k = 6.0;
  StepScheme scheme{};

  static std::vector<double> default_epsilons(double eps0) { return {eps0, eps0 / 2.0, eps0 / 4.0}; }

  void validate() const {
    if (!(t > 0.0)) throw ValidationError("density query: t must be positive");
    if (xs.empty()) throw ValidationError("density query: needs points");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (!(xs[i] < xs[i + 1])) throw ValidationError("density query: points must increase");
    }
    if (epsilons.empty()) throw ValidationError("density query: needs an epsilon sequence");
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) min_gap = std::min(min_gap, xs[i + 1] - xs[i]);
    for (double e : epsilons) {
      if (!(e > 0.0)) throw ValidationError("density query: epsilons must be positive");
      if (xs.size() >= 2 && !(e < 0.5 * min_gap)) {
        throw ValidationError("density query: epsilon must stay below half the minimal gap");
      }
    }
  }

  double auto_mesh() const { return mesh > 0.0 ? mesh : 1.0 / 64.0; }

  Interval window() const {
    double pad = window_pad_k * std::sqrt(t);
    double emax = *std::max_element(epsilons.begin(), epsilons.end());
    return Interval{xs.front() - emax - pad, xs.back() + emax + pad};
  }

  DiscreteConfig start_config() const {
    if (u.is_two_valued()) return interface_of(u);
    return interface_of(lattice_approximant(u, auto_mesh(), window()));
  }
};

struct ExtrapolatedEstimate {
  std::vector<double> epsilons;
  std::vector<EstimateWithCI> per_epsilon;
  EstimateWithCI extrapolated;
};

namespace detail {

// Ordinary-least-squares intercept weights for a linear fit in epsilon:
// the extrapolated value is sum_i w_i * v(eps_i).
inline std::vector<double> extrapolation_weights(std::span<const double> eps) {
  std::size_t n = eps.size();
  if (n == 1) return {1.0};
  double xbar = 0.0;
  for (double e : eps) xbar += e;
  xbar /= static_cast<double>(n);
  double sxx = 0.0;
  for (double e : eps) sxx += (e - xbar) * (e - xbar);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / static_cast<double>(n) - xbar * (eps[i] - xbar) / sxx;
  }
  return w;
}

// Reduces replica rows (one value per epsilon) into per-epsilon estimates
// plus the extrapolated combination, with replica-level standard errors.
inline ExtrapolatedEstimate reduce_rows(std::span<const double> rows, std::size_t width,
                                        std::span<const double> eps, const ReplicaPlan& plan) {
  ExtrapolatedEstimate out;
  out.epsilons.assign(eps.begin(), eps.end());
  std::vector<double> w = extrapolation_weights(eps);
  std::vector<RunningMoments> cols(width);
  RunningMoments combo;
  std::size_t replicas = rows.size() / width;
  for (std::size_t r = 0; r < replicas; ++r) {
    const double* row = rows.data() + r * width;
    bool ok = true;
    for (std::size_t e = 0; e < width; ++e) {
      if (std::isnan(row[e])) ok = false;
    }
    if (!ok) continue;
    double z = 0.0;
    for (std::size_t e = 0; e < width; ++e) {
      cols[e].add(row[e]);
      z += w[e] * row[e];
    }
    combo.add(z);
  }
  SeedProvenance seed{plan.root_seed, plan.experiment};
  for (std::size_t e = 0; e < width; ++e) {
    out.per_epsilon.push_back(EstimateWithCI{cols[e].mean(), cols[e].std_error(), cols[e].count(), seed});
  }
  out.extrapolated = EstimateWithCI{combo.mean(), combo.std_error(), combo.count(), seed};
  return out;
}

}  // namespace detail

// (2 eps)^{-n} P(every window [x_i +- eps] holds a particle) from the
// annihilating system started at the class's interface configuration.
inline ExtrapolatedEstimate density_mc(const DensityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  DiscreteConfig x0 = q.start_config();
  std::size_t width = q.epsilons.size();
  std::size_t n = q.xs.size();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/density_mc");
  auto rows = replica_rows(p, width, [&](RngStream& stream, long, double* row) {
    auto states = abm_run(x0, q.t, q.scheme, stream);
    const AnnihilatingState& s = states.back();
    for (std::size_t e = 0; e < width; ++e) {
      double eps = q.epsilons[e];
      bool all = true;
      for (double x : q.xs) {
        if (count_in(s, x - eps, x + eps) == 0) {
          all = false;
          break;
        }
      }
      row[e] = all ? std::pow(2.0 * eps, -static_cast<double>(n)) : 0.0;
    }
  });
  return detail::reduce_rows(rows, width, q.epsilons, p);
}

// Exact 1-point density by panel-aligned adaptive quadrature of
//   (2 pi t^2)^{-1} iint u(x+y1)(1-u(x+y2)) |y2-y1| exp(-|y|^2/(2t)) dy.
// The inner integral is closed-form in erf/exp; the outer integral is
// adaptive per panel, with panels aligned to the profile's breakpoints.
inline double density1_quadrature(const DensityProfile& u, double t, double x,
                                  double abs_tol = 1e-8) {
  if (!(t > 0.0)) throw ValidationError("density1_quadrature: t must be positive");
  if (u.domain.is_torus()) throw ValidationError("density1_quadrature: line profiles only");
  double R = 10.0 * std::sqrt(t);
  std::vector<double> cuts{-R};
  for (double b : u.breakpoints) {
    double yb = b - x;
    if (yb > -R && yb < R) cuts.push_back(yb);
  }
  cuts.push_back(R);
  std::sort(cuts.begin(), cuts.end());

  auto iexp = [&](double l, double h) {
    double st = std::sqrt(t);
    return std::sqrt(2.0 * M_PI * t) * (normal_cdf(h / st) - normal_cdf(l / st));
  };
  auto iy = [&](double l, double h) {
    return t * (std::exp(-l * l / (2.0 * t)) - std::exp(-h * h / (2.0 * t)));
  };

  std::size_t m = cuts.size() - 1;
  // collect the panels with a nonzero coefficient first, to split the budget
  struct Panel {
    double a1, b1, a2, b2, coeff;
  };
  std::vector<Panel> panels;
  for (std::size_t i = 0; i < m; ++i) {
    double c1 = u(x + 0.5 * (cuts[i] + cuts[i + 1]));
    if (c1 == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      double c2 = 1.0 - u(x + 0.5 * (cuts[j] + cuts[j + 1]));
      double coeff = c1 * c2;
      if (coeff == 0.0) continue;
      panels.push_back(Panel{cuts[i], cuts[i + 1], cuts[j], cuts[j + 1], coeff});
    }
  }
  if (panels.empty()) return 0.0;
  double raw_tol = abs_tol * 2.0 * M_PI * t * t / static_cast<double>(panels.size());
  double total = 0.0;
  for (const Panel& pl : panels) {
    auto inner = [&](double y1) {
      if (y1 <= pl.a2) return iy(pl.a2, pl.b2) - y1 * iexp(pl.a2, pl.b2);
      if (y1 >= pl.b2) return y1 * iexp(pl.a2, pl.b2) - iy(pl.a2, pl.b2);
      return (y1 * iexp(pl.a2, y1) - iy(pl.a2, y1)) + (iy(y1, pl.b2) - y1 * iexp(y1, pl.b2));
    };
    auto f = [&](double y1) { return std::exp(-y1 * y1 / (2.0 * t)) * inner(y1); };
    total += pl.coeff * adaptive_quadrature(f, pl.a1, pl.b1, raw_tol);
  }
  return total / (2.0 * M_PI * t * t);
}

// (2 eps)^{-n} P(marks at x_i-eps and x_i+eps differ for every i): the dual
// estimator on the 2n-point coalescing system with Bernoulli(u) marks.
inline ExtrapolatedEstimate density_n_dual_mc(const DensityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  std::size_t width = q.epsilons.size();
  std::size_t n = q.xs.size();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/density_dual_mc");
  auto rows = replica_rows(p, width, [&](RngStream& stream, long, double* row) {
    for (std::size_t e = 0; e < width; ++e) {
      double eps = q.epsilons[e];
      std::vector<double> pts;
      pts.reserve(2 * n);
      for (double x : q.xs) {
        pts.push_back(x - eps);
        pts.push_back(x + eps);
      }
      MarksResult marks = voter_marginal_marks(q.u, q.t, pts, q.scheme, stream);
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (marks.bits[2 * i] == marks.bits[2 * i + 1]) {
          all = false;
          break;
        }
      }
      row[e] = all ? std::pow(2.0 * eps, -static_cast<double>(n)) : 0.0;
    }
  });
  return detail::reduce_rows(rows, width, q.epsilons, p);
}

// (4 eps)^{-n} P(the two dual motions around each x_i stay distinct): the
// pure survival event, no marks; equals the n-point density at the balanced
// homogeneous class.
inline ExtrapolatedEstimate density_maximal_mc(std::span<const double> xs, double t,
                                               std::span<const double> epsilons,
                                               const ReplicaPlan& plan,
                                               const StepScheme& scheme = {}) {
  DensityQuery q;
  q.u = DensityProfile::constant(0.5);
  q.t = t;
  q.xs.assign(xs.begin(), xs.end());
  q.epsilons.assign(epsilons.begin(), epsilons.end());
  q.scheme = scheme;
  q.validate();
  std::size_t width = q.epsilons.size();
  std::size_t n = q.xs.size();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/density_maximal_mc");
  auto rows = replica_rows(p, width, [&](RngStream& stream, long, double* row) {
    for (std::size_t e = 0; e < width; ++e) {
      double eps = q.epsilons[e];
      std::vector<double> pts;
      pts.reserve(2 * n);
      for (double x : q.xs) {
        pts.push_back(x - eps);
        pts.push_back(x + eps);
      }
      DiscreteConfig x0(Domain::line(), pts);
      InteractingSystem sys(InteractingSystem::Mode::Coalesce, x0);
      sys.advance(q.t, q.scheme, stream);
      CoalescingState st = sys.coalescing_state();
      std::vector<int> cluster(2 * n, -1);
      for (std::size_t c = 0; c < st.blocks.size(); ++c) {
        long w = block_width(st.blocks[c], st.initial_count);
        for (long k = 0; k < w; ++k) {
          cluster[static_cast<std::size_t>((st.blocks[c].lo + k) % st.initial_count)] =
              static_cast<int>(c);
        }
      }
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (cluster[2 * i] == cluster[2 * i + 1]) {
          all = false;
          break;
        }
      }
      row[e] = all ? std::pow(4.0 * eps, -static_cast<double>(n)) : 0.0;
    }
  });
  return detail::reduce_rows(rows, width, q.epsilons, p);
}

// (2 eps)^{-n} P(no pair of the 2n coordinates collides before t).
inline ExtrapolatedEstimate q_estimate(std::span<const double> xs, double t,
                                       std::span<const double> epsilons, const ReplicaPlan& plan,
                                       const StepScheme& scheme = {}) {
  DensityQuery q;
  q.u = DensityProfile::constant(0.5);
  q.t = t;
  q.xs.assign(xs.begin(), xs.end());
  q.epsilons.assign(epsilons.begin(), epsilons.end());
  q.scheme = scheme;
  q.validate();
  std::size_t width = q.epsilons.size();
  std::size_t n = q.xs.size();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/q_estimate");
  auto rows = replica_rows(p, width, [&](RngStream& stream, long, double* row) {
    for (std::size_t e = 0; e < width; ++e) {
      double eps = q.epsilons[e];
      std::vector<double> pts;
      pts.reserve(2 * n);
      for (double x : q.xs) {
        pts.push_back(x - eps);
        pts.push_back(x + eps);
      }
      DiscreteConfig x0(Domain::line(), pts);
      InteractingSystem sys(InteractingSystem::Mode::Coalesce, x0);
      sys.advance(q.t, q.scheme, stream);
      bool survived = sys.alive_count() == static_cast<long>(2 * n);
      row[e] = survived ? std::pow(2.0 * eps, -static_cast<double>(n)) : 0.0;
    }
  });
  return detail::reduce_rows(rows, width, q.epsilons, p);
}

// MC route for the thinned density: run, thin, then window counts.
inline ExtrapolatedEstimate thinned_density_mc(const DensityQuery& q, const ReplicaPlan& plan) {
  q.validate();
  DiscreteConfig x0 = q.start_config();
  std::size_t width = q.epsilons.size();
  std::size_t n = q.xs.size();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/thinned_density_mc");
  auto rows = replica_rows(p, width, [&](RngStream& stream, long, double* row) {
    auto states = abm_run(x0, q.t, q.scheme, stream);
    const AnnihilatingState& s = states.back();
    DiscreteConfig thinned = thin(DiscreteConfig(s.domain, s.positions), stream);
    for (std::size_t e = 0; e < width; ++e) {
      double eps = q.epsilons[e];
      bool all = true;
      for (double x : q.xs) {
        if (count_in(thinned, x - eps, x + eps) == 0) {
          all = false;
          break;
        }
      }
      row[e] = all ? std::pow(2.0 * eps, -static_cast<double>(n)) : 0.0;
    }
  });
  return detail::reduce_rows(rows, width, q.epsilons, p);
}

struct ThinnedFormulaResult {
  EstimateWithCI value;
  long accepted = 0;
  double acceptance_rate = 1.0;
};

// Formula route for the thinned density: q(t,x)/2 times the conditional
// expectation of the two color-product terms given no collision. For n = 1
// the conditional law is sampled exactly; for n >= 2 it is estimated by
// rejection on the survival event, with capped attempts.
inline ThinnedFormulaResult thinned_density_formula(const DensityProfile& u, double t,
                                                    std::span<const double> xs,
                                                    std::span<const double> epsilons,
                                                    const ReplicaPlan& plan,
                                                    const StepScheme& scheme = {},
                                                    long max_attempts_per_replica = 10000000) {
  if (!(t > 0.0)) throw ValidationError("thinned_density_formula: t must be positive");
  std::size_t n = xs.size();
  ThinnedFormulaResult out;
  if (n == 1) {
    double x = xs[0];
    double q_exact = 1.0 / std::sqrt(M_PI * t);
    ReplicaPlan p = plan.with_experiment(plan.experiment + "/thinned_formula");
    EstimateWithCI h = mc_estimate(p, [&](RngStream& stream, long) {
      auto [y1, y2] = noncolliding_pair(t, stream);
      return match_indicator(u, x + y1, x + y2);
    });
    out.value = h;
    out.value.mean *= 0.5 * q_exact;
    out.value.std_error *= 0.5 * q_exact;
    out.accepted = h.replicas;
    return out;
  }

  DensityQuery dq;
  dq.u = u;
  dq.t = t;
  dq.xs.assign(xs.begin(), xs.end());
  dq.epsilons.assign(epsilons.begin(), epsilons.end());
  dq.scheme = scheme;
  dq.validate();
  std::size_t width = dq.epsilons.size();
  ReplicaPlan p = plan.with_experiment(plan.experiment + "/thinned_formula_cond");
  std::vector<long> attempts_used(static_cast<std::size_t>(p.replicas), 0);
  auto rows = replica_rows(p, width, [&](RngStream& stream, long rep, double* row) {
    long attempts = 0;
    for (std::size_t e = 0; e < width; ++e) {
      double eps = dq.epsilons[e];
      std::vector<double> pts;
      pts.reserve(2 * n);
      for (double x : dq.xs) {
        pts.push_back(x - eps);
        pts.push_back(x + eps);
      }
      row[e] = std::numeric_limits<double>::quiet_NaN();
      while (attempts < max_attempts_per_replica) {
        ++attempts;
        DiscreteConfig x0(Domain::line(), pts);
        InteractingSystem sys(InteractingSystem::Mode::Coalesce, x0);
        sys.advance(dq.t, dq.scheme, stream);
        if (sys.alive_count() != static_cast<long>(2 * n)) continue;
        const auto& ys = sys.positions();
        double term1 = 1.0, term2 = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
          term1 *= u(ys[2 * k]) * (1.0 - u(ys[2 * k + 1]));
          term2 *= (1.0 - u(ys[2 * k])) * u(ys[2 * k + 1]);
        }
        row[e] = term1 + term2;
        break;
      }
    }
    attempts_used[static_cast<std::size_t>(rep)] = attempts;
  });
  ExtrapolatedEstimate cond = detail::reduce_rows(rows, width, dq.epsilons, p);
  ExtrapolatedEstimate qhat = q_estimate(xs, t, epsilons, plan, scheme);
  double m1 = cond.extrapolated.mean;
  double s1 = cond.extrapolated.std_error;
  double m2 = qhat.extrapolated.mean;
  double s2 = qhat.extrapolated.std_error;
  out.value.mean = 0.5 * m1 * m2;
  out.value.std_error = 0.5 * std::sqrt(m1 * m1 * s2 * s2 + m2 * m2 * s1 * s1 + s1 * s1 * s2 * s2);
  out.value.replicas = cond.extrapolated.replicas;
  out.value.seed = cond.extrapolated.seed;
  out.accepted = cond.extrapolated.replicas;
  long total_attempts = 0;
  for (long a : attempts_used) total_attempts += a;
  out.acceptance_rate = total_attempts > 0
                            ? static_cast<double>(out.accepted * width) / static_cast<double>(total_attempts)
                            : 1.0;
  return out;
}

}  // namespace abmlab
