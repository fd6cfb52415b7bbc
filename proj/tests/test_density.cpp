#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "abmlab/density.hpp"
#include "abmlab/estimate.hpp"
#include "abmlab/stats.hpp"

using namespace abmlab;

namespace {
DensityQuery make_query(DensityProfile u, double t, std::vector<double> xs, double eps0,
                        double dt_div = 256.0) {
  DensityQuery q;
  q.u = std::move(u);
  q.t = t;
  q.xs = std::move(xs);
  q.epsilons = DensityQuery::default_epsilons(eps0);
  q.scheme = StepScheme{t / dt_div, true};
  return q;
}
}  // namespace

TEST_CASE("quadrature: homogeneous closed form 2 lambda (1-lambda) / sqrt(pi t)") {
  for (double t : {0.5, 1.0, 2.0}) {
    for (double lam : {0.1, 0.25, 0.5}) {
      double target = 2.0 * lam * (1.0 - lam) / std::sqrt(M_PI * t);
      double got = density1_quadrature(DensityProfile::constant(lam), t, 0.3);
      CHECK(got == Catch::Approx(target).margin(1e-6));
    }
  }
}

TEST_CASE("quadrature: half-line class gives the Gaussian curve") {
  DensityProfile u = DensityProfile::left_indicator();
  CHECK(density1_quadrature(u, 1.0, 0.0) == Catch::Approx(0.3989422804014327).margin(1e-6));
  CHECK(density1_quadrature(u, 1.0, 1.0) == Catch::Approx(0.24197072451914337).margin(1e-6));
  CHECK(density1_quadrature(u, 2.0, -1.0) ==
        Catch::Approx(std::exp(-0.25) / std::sqrt(4.0 * M_PI)).margin(1e-6));
}

TEST_CASE("quadrature: a small even perturbation beats the balanced class at the origin") {
  DensityProfile mix(Domain::line(), {0.0}, {0.95, 0.05});
  double got = density1_quadrature(mix, 1.0, 0.0);
  CHECK(got == Catch::Approx(0.37674125375025463).margin(1e-6));
  CHECK(got > 1.0 / (2.0 * std::sqrt(M_PI)));
}

TEST_CASE("homogeneous densities are maximized by the balanced class") {
  double best = density1_quadrature(DensityProfile::constant(0.5), 1.0, 0.0);
  for (double lam : {0.1, 0.25}) {
    CHECK(density1_quadrature(DensityProfile::constant(lam), 1.0, 0.0) < best);
  }
}

TEST_CASE("density_mc: empty class is identically zero") {
  auto q = make_query(DensityProfile::constant(0.0), 1.0, {0.0}, 0.2);
  ReplicaPlan plan{0x5EED, "density-zero", 100, 0};
  auto est = density_mc(q, plan);
  CHECK(est.extrapolated.mean == 0.0);
  CHECK(est.extrapolated.std_error == 0.0);
}

TEST_CASE("density_mc: half-line class reproduces the Gaussian at the origin") {
  auto q = make_query(DensityProfile::left_indicator(), 1.0, {0.0}, 0.3);
  ReplicaPlan plan{0x5EED, "density-halfline", 20000, 0};
  auto est = density_mc(q, plan);
  CHECK(est.extrapolated.mean ==
        Catch::Approx(0.3989422804014327).margin(3.0 * est.extrapolated.std_error + 0.004));
}

TEST_CASE("dual-mark density route: one point at the balanced class") {
  auto q = make_query(DensityProfile::constant(0.5), 1.0, {0.0}, 0.2);
  ReplicaPlan plan{0x5EED, "density-dual-half", 30000, 0};
  auto est = density_n_dual_mc(q, plan);
  CHECK(est.extrapolated.mean ==
        Catch::Approx(0.28209479177387814).margin(3.0 * est.extrapolated.std_error + 0.003));
}

TEST_CASE("dual-mark density route agrees with density_mc without meshing") {
  // two-valued class: both routes are free of lattice-approximation bias
  auto q = make_query(DensityProfile::left_indicator(), 1.0, {0.0}, 0.3);
  ReplicaPlan plan{0x5EED, "density-routes", 20000, 0};
  auto direct = density_mc(q, plan.with_experiment("routes-direct"));
  auto dual = density_n_dual_mc(q, plan.with_experiment("routes-dual"));
  CHECK(std::fabs(direct.extrapolated.mean - dual.extrapolated.mean) <=
        3.0 * pooled_std_error(direct.extrapolated, dual.extrapolated));
}

TEST_CASE("maximal route: one point and agreement with the dual route") {
  std::vector<double> xs{0.0};
  auto eps = DensityQuery::default_epsilons(0.2);
  ReplicaPlan plan{0x5EED, "density-maximal", 30000, 0};
  StepScheme scheme{1.0 / 256.0, true};
  auto maximal = density_maximal_mc(xs, 1.0, eps, plan, scheme);
  CHECK(maximal.extrapolated.mean ==
        Catch::Approx(0.28209479177387814).margin(3.0 * maximal.extrapolated.std_error + 0.003));

  auto q = make_query(DensityProfile::constant(0.5), 1.0, {0.0}, 0.2);
  auto dual = density_n_dual_mc(q, plan.with_experiment("maximal-vs-dual"));
  CHECK(std::fabs(maximal.extrapolated.mean - dual.extrapolated.mean) <=
        3.0 * pooled_std_error(maximal.extrapolated, dual.extrapolated));

  // the raw survival frequency shrinks with the window
  for (std::size_t e = 0; e + 1 < eps.size(); ++e) {
    double p_wide = maximal.per_epsilon[e].mean * 4.0 * eps[e];
    double p_narrow = maximal.per_epsilon[e + 1].mean * 4.0 * eps[e + 1];
    double se = 4.0 * (eps[e] * maximal.per_epsilon[e].std_error +
                       eps[e + 1] * maximal.per_epsilon[e + 1].std_error);
    CHECK(p_narrow <= p_wide + 3.0 * se);
  }
}

TEST_CASE("two points far apart nearly factorize at the balanced class") {
  auto q = make_query(DensityProfile::constant(0.5), 1.0, {0.0, 5.0}, 0.2);
  ReplicaPlan plan{0x5EED, "density-dual-pair", 60000, 0};
  auto est = density_n_dual_mc(q, plan);
  double single = 0.28209479177387814;
  CHECK(est.extrapolated.mean == Catch::Approx(single * single).epsilon(0.10));
}

TEST_CASE("q_estimate: the survival factor at one point") {
  std::vector<double> xs{0.0};
  auto eps = DensityQuery::default_epsilons(0.2);
  ReplicaPlan plan{0x5EED, "q-single", 30000, 0};
  StepScheme scheme{1.0 / 256.0, true};
  auto q1 = q_estimate(xs, 1.0, eps, plan, scheme);
  CHECK(q1.extrapolated.mean ==
        Catch::Approx(0.5641895835477563).margin(3.0 * q1.extrapolated.std_error + 0.006));
  // fixed-epsilon closed form: the pair survival at separation 2 eps
  for (std::size_t e = 0; e < eps.size(); ++e) {
    double closed = pair_survival_prob(PairLaw(1.0, 2.0 * eps[e])) / (2.0 * eps[e]);
    CHECK(q1.per_epsilon[e].mean ==
          Catch::Approx(closed).margin(3.0 * q1.per_epsilon[e].std_error));
  }
}

TEST_CASE("q grows as the points spread") {
  auto eps = DensityQuery::default_epsilons(0.1);
  ReplicaPlan plan{0x5EED, "q-spread", 20000, 0};
  StepScheme scheme{1.0 / 256.0, true};
  auto near = q_estimate(std::vector<double>{0.0, 1.0}, 1.0, eps, plan.with_experiment("q-near"), scheme);
  auto far = q_estimate(std::vector<double>{0.0, 2.0}, 1.0, eps, plan.with_experiment("q-far"), scheme);
  CHECK(far.extrapolated.mean - near.extrapolated.mean >
        -3.0 * pooled_std_error(far.extrapolated, near.extrapolated));
  CHECK(far.extrapolated.mean > near.extrapolated.mean);
}

TEST_CASE("thinned density: degenerate class") {
  auto q = make_query(DensityProfile::constant(0.0), 1.0, {0.0}, 0.2);
  ReplicaPlan plan{0x5EED, "thin-zero", 100, 0};
  CHECK(thinned_density_mc(q, plan).extrapolated.mean == 0.0);
}

TEST_CASE("thinned formula: exact sampler route at a homogeneous class") {
  ReplicaPlan plan{0x5EED, "thin-formula-lam", 40000, 0};
  double lam = 0.25, t = 2.0;
  auto res = thinned_density_formula(DensityProfile::constant(lam), t, std::vector<double>{0.7},
                                     std::vector<double>{0.1}, plan);
  double target = lam * (1.0 - lam) / std::sqrt(M_PI * t);
  CHECK(res.value.mean == Catch::Approx(target).margin(3.0 * res.value.std_error + 1e-12));
}

TEST_CASE("thinned density: both routes near 1/(4 sqrt(pi)) and consistent") {
  ReplicaPlan plan{0x5EED, "thin-routes", 25000, 0};
  auto formula = thinned_density_formula(DensityProfile::constant(0.5), 1.0,
                                         std::vector<double>{0.0}, std::vector<double>{0.1}, plan);
  CHECK(formula.value.mean ==
        Catch::Approx(0.14104739588693907).margin(3.0 * formula.value.std_error + 1e-9));

  DensityQuery q = make_query(DensityProfile::constant(0.5), 1.0, {0.0}, 0.25, 512.0);
  q.mesh = 1.0 / 32.0;
  q.window_pad_k = 5.0;
  ReplicaPlan mc_plan{0x5EED, "thin-mc-route", 12000, 0};
  auto mc = thinned_density_mc(q, mc_plan);
  CHECK(std::fabs(mc.extrapolated.mean - formula.value.mean) <=
        3.0 * pooled_std_error(mc.extrapolated, formula.value) + 0.02);
}

TEST_CASE("thinned formula: rejection route for two points", "[slow]") {
  ReplicaPlan plan{0x5EED, "thin-formula-n2", 300, 0};
  StepScheme scheme{1.0 / 256.0, true};
  auto res = thinned_density_formula(DensityProfile::constant(0.5), 1.0,
                                     std::vector<double>{0.0, 1.0},
                                     std::vector<double>{0.15, 0.075}, plan, scheme);
  CHECK(res.accepted > 0);
  CHECK(res.acceptance_rate > 0.0);
  // crude scale check: within a factor-band of the product heuristic
  double scale = 0.14104739588693907;
  CHECK(res.value.mean > 0.0);
  CHECK(res.value.mean == Catch::Approx(scale * scale * 4.0 * 0.5).epsilon(0.9));
}

TEST_CASE("translation equivariance of the dual route") {
  ReplicaPlan plan{0x5EED, "density-translate", 20000, 0};
  auto qa = make_query(DensityProfile::constant(0.5), 1.0, {0.0}, 0.2);
  auto qb = make_query(DensityProfile::constant(0.5), 1.0, {3.0}, 0.2);
  auto a = density_n_dual_mc(qa, plan.with_experiment("translate-a"));
  auto b = density_n_dual_mc(qb, plan.with_experiment("translate-b"));
  CHECK(std::fabs(a.extrapolated.mean - b.extrapolated.mean) <=
        3.0 * pooled_std_error(a.extrapolated, b.extrapolated));
}

TEST_CASE("query validation") {
  auto q = make_query(DensityProfile::constant(0.5), 1.0, {0.0, 1.0}, 0.6);
  ReplicaPlan plan{0x5EED, "validation", 10, 0};
  CHECK_THROWS_AS(density_mc(q, plan), ValidationError);  // eps >= half gap
  auto q2 = make_query(DensityProfile::constant(0.5), -1.0, {0.0}, 0.1);
  CHECK_THROWS_AS(density_mc(q2, plan), ValidationError);
}
