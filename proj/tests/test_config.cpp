#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "abmlab/density_profile.hpp"
#include "abmlab/discrete_config.hpp"
#include "abmlab/entrance.hpp"
#include "abmlab/rng.hpp"
#include "abmlab/stats.hpp"
#include "abmlab/test_function.hpp"

using namespace abmlab;

TEST_CASE("interface of an indicator is its endpoints") {
  DensityProfile u(Domain::line(), {0.0, 1.0}, {0.0, 1.0, 0.0});  // 1_[0,1]
  auto iface = interface_of(u);
  REQUIRE(iface.positions == std::vector<double>{0.0, 1.0});
}

TEST_CASE("constant profiles have empty interface") {
  auto u = DensityProfile::constant(0.0);
  CHECK(interface_of(u).positions.empty());
  CHECK(interface_of(DensityProfile::constant(1.0)).positions.empty());
}

TEST_CASE("interface rejects fractional values") {
  auto u = DensityProfile::constant(0.5);
  CHECK_THROWS_AS(interface_of(u), NotTwoValued);
}

TEST_CASE("interface is invariant under complementation") {
  DensityProfile u(Domain::line(), {-1.0, 0.5, 2.0}, {1.0, 0.0, 1.0, 0.0});
  CHECK(interface_of(u).positions == interface_of(u.flipped()).positions);
}

TEST_CASE("class_from_config alternates from the left value") {
  DiscreteConfig single(Domain::line(), {0.0});
  DensityProfile u = class_from_config(single, 1);  // 1 on (-inf, 0)
  CHECK(u(-0.5) == 1.0);
  CHECK(u(0.5) == 0.0);

  DensityProfile z = class_from_config(DiscreteConfig{}, 0);
  CHECK(z.is_constant());
  CHECK(z(3.0) == 0.0);

  DiscreteConfig three(Domain::line(), {0.0, 1.0, 2.0});
  DensityProfile w = class_from_config(three, 0);  // 1_[0,1] + 1_[2,inf)
  CHECK(w(-1.0) == 0.0);
  CHECK(w(0.5) == 1.0);
  CHECK(w(1.5) == 0.0);
  CHECK(w(2.5) == 1.0);
}

TEST_CASE("round trip: profile -> interface -> profile") {
  RngStream s(11, 0);
  for (int rep = 0; rep < 200; ++rep) {
    // random two-valued profile
    int k = 1 + static_cast<int>(s.uniform() * 6.0);
    std::vector<double> bps;
    double x = -3.0;
    for (int i = 0; i < k; ++i) {
      x += 0.1 + 2.0 * s.uniform();
      bps.push_back(x);
    }
    int left = s.uniform() < 0.5 ? 0 : 1;
    DensityProfile u = class_from_config(DiscreteConfig(Domain::line(), bps), left);
    DensityProfile back = class_from_config(interface_of(u), static_cast<int>(u.values.front()));
    REQUIRE(back == u);
  }
}

TEST_CASE("torus interface configs need an even count") {
  DiscreteConfig odd(Domain::torus(10.0), {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(class_from_config(odd, 0), OddCountOnTorus);
  DiscreteConfig even(Domain::torus(10.0), {1.0, 2.0});
  DensityProfile u = class_from_config(even, 0);
  CHECK(u(0.0) == 0.0);
  CHECK(u(1.5) == 1.0);
  CHECK(u(9.0) == 0.0);
  CHECK(interface_of(u).positions == even.positions);
}

TEST_CASE("density class identifies u with 1-u") {
  DensityProfile u(Domain::line(), {0.0}, {1.0, 0.0});
  CHECK(DensityClass::of(u) == DensityClass::of(u.flipped()));
  // canonical representative starts with the smaller value
  CHECK(DensityClass::of(u).representative.values.front() == 0.0);
  CHECK(DensityClass::of(DensityProfile::constant(0.7)).representative.values.front() ==
        Catch::Approx(0.3));
}

TEST_CASE("entrance families: direct formulas") {
  auto lat = entrance_family(EntranceKind::Lattice, 2, {0.0, 1.0});
  CHECK(lat.positions == std::vector<double>{0.0, 0.5, 1.0});

  auto quarter = entrance_family(EntranceKind::Quarter, 1, {0.0, 2.0});
  CHECK(quarter.positions == std::vector<double>{0.0, 0.25, 1.0, 1.25, 2.0});

  auto paired = entrance_family(EntranceKind::Paired, 10, {0.0, 0.5}, 2.0);
  std::vector<double> want{0.0, 0.01, 0.1, 0.11, 0.2, 0.21, 0.3, 0.31, 0.4, 0.41, 0.5};
  REQUIRE(paired.positions.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(paired.positions[i] == Catch::Approx(want[i]).margin(1e-12));
  }

  CHECK_THROWS_AS(entrance_family(EntranceKind::Paired, 10, {0.0, 1.0}, 1.0), BadAlpha);
}

TEST_CASE("poisson family has the right intensity") {
  RngStream s(3, 5);
  RunningMoments acc;
  for (int i = 0; i < 3000; ++i) {
    auto cfg = entrance_family(EntranceKind::Poisson, 20, {0.0, 2.0}, 2.0, &s);
    acc.add(static_cast<double>(cfg.size()));
    REQUIRE(std::is_sorted(cfg.positions.begin(), cfg.positions.end()));
  }
  CHECK(acc.mean() == Catch::Approx(40.0).margin(4.0 * acc.std_error() + 0.5));
}

TEST_CASE("vague pairing exact values") {
  TestFunction hat = TestFunction::hat(0.0, 1.0);
  CHECK(vague_pairing(DensityProfile::constant(0.0), hat) == 0.0);
  CHECK(vague_pairing(DensityProfile::constant(1.0), hat) == Catch::Approx(1.0).margin(1e-14));
  // linearity in phi and monotonicity in u
  TestFunction hat2 = TestFunction::hat(0.0, 1.0, 2.0);
  DensityProfile u(Domain::line(), {0.0}, {0.2, 0.8});
  CHECK(vague_pairing(u, hat2) == Catch::Approx(2.0 * vague_pairing(u, hat)).margin(1e-13));
  DensityProfile v(Domain::line(), {0.0}, {0.4, 0.9});
  CHECK(vague_pairing(u, hat) <= vague_pairing(v, hat));
}

TEST_CASE("windowed lattice pairings approach half the hat mass") {
  TestFunction hat = TestFunction::hat(0.0, 1.0);
  double target = 0.5 * hat.integral();
  double prev_gap = 1e9;
  for (int n : {4, 16, 64}) {
    auto cfg = entrance_family(EntranceKind::Lattice, n, {-2.0, 2.0});
    double p = vague_pairing(class_from_config(cfg, 0), hat);
    double gap = std::fabs(p - target);
    CHECK(gap <= hat.integral() / (2.0 * n) + 1e-12);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
}

TEST_CASE("vague limit check: the three deterministic families") {
  TestFunction hat = TestFunction::hat(0.0, 1.0);
  std::vector<int> ns{1, 2, 4, 8, 16, 32, 64};
  double I = hat.integral();

  auto lat = vague_limit_check(EntranceKind::Lattice, hat, 0.5, ns, I / (2.0 * 64));
  CHECK(lat.converged);

  auto paired = vague_limit_check(EntranceKind::Paired, hat, 0.0, ns, 1.05 * I / 64.0, 2.0);
  CHECK(paired.converged);
  // the paired gap is the family's own mass: ~ I/n
  CHECK(paired.gaps.back() == Catch::Approx(I / 64.0).epsilon(0.2));

  auto quarter = vague_limit_check(EntranceKind::Quarter, hat, 0.25, ns, I / (4.0 * 64));
  CHECK(quarter.converged);

  // decay, not just the final value
  CHECK(lat.gaps.back() <= lat.gaps.front() + 1e-12);
  CHECK(paired.gaps.back() < paired.gaps.front());
}

TEST_CASE("off-center test functions still converge at rate 1/n") {
  TestFunction bump({-0.3, 0.1, 0.4, 0.9}, {0.0, 1.0, 0.5, 0.0});
  std::vector<int> ns{8, 64};
  auto rep = vague_limit_check(EntranceKind::Lattice, bump, 0.5, ns, 2.0 / 64.0);
  CHECK(rep.converged);
}

TEST_CASE("points accumulating at a finite point give oscillating pairings") {
  // x_n = {-1/1, -1/2, ..., -1/n} accumulating at 0; the pairing against a
  // hat straddling 0 oscillates between consecutive n and has no limit.
  TestFunction hat = TestFunction::hat(0.0, 0.5);
  auto pairing_at = [&](int n) {
    std::vector<double> pts;
    for (int k = 1; k <= n; ++k) pts.push_back(-1.0 / static_cast<double>(k));
    return vague_pairing(class_from_config(DiscreteConfig(Domain::line(), pts), 0), hat);
  };
  double right_mass = hat.integral(0.0, 0.5);
  for (int n : {10, 11, 20, 21}) {
    double jump = std::fabs(pairing_at(n) - pairing_at(n + 1));
    CHECK(jump >= 0.8 * right_mass);  // the right half flips every step
  }
}

TEST_CASE("lattice approximant reproduces the target pairings at O(h)") {
  DensityProfile u = DensityProfile::constant(0.5);
  TestFunction hat = TestFunction::hat(0.0, 1.0);
  for (double h : {1.0 / 8, 1.0 / 32}) {
    DensityProfile approx = lattice_approximant(u, h, {-3.0, 3.0});
    REQUIRE(approx.is_two_valued());
    CHECK(std::fabs(vague_pairing(approx, hat) - 0.5 * hat.integral()) <= h * hat.integral());
  }
  // a non-constant profile: eps + (1-2eps) 1_{R^-}
  DensityProfile mix(Domain::line(), {0.0}, {0.95, 0.05});
  DensityProfile am = lattice_approximant(mix, 1.0 / 64, {-3.0, 3.0});
  REQUIRE(am.is_two_valued());
  CHECK(vague_pairing(am, hat) ==
        Catch::Approx(vague_pairing(mix, hat)).margin(hat.integral() / 32.0));
}

TEST_CASE("count and parity on sorted positions") {
  std::vector<double> pos{0.5};
  CHECK(count_in(std::span<const double>(pos), 0.0, 1.0) == 1);
  CHECK_FALSE(parity_in_even(std::span<const double>(pos), 0.0, 1.0));
  std::vector<double> none;
  CHECK(count_in(std::span<const double>(none), 0.0, 1.0) == 0);
  CHECK(parity_in_even(std::span<const double>(none), 0.0, 1.0));
  // additivity over adjacent windows
  std::vector<double> many{0.1, 0.2, 0.7, 1.3, 2.9};
  long total = count_in(std::span<const double>(many), 0.0, 3.0);
  long a = count_in(std::span<const double>(many), 0.0, 1.0);
  long b = count_in(std::span<const double>(many), 1.0000000001, 3.0);
  CHECK(total == a + b);
}
