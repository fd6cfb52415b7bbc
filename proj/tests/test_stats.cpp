#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "abmlab/stats.hpp"

using namespace abmlab;

TEST_CASE("normal cdf matches tabulated values") {
  CHECK(normal_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(normal_cdf(1.0) == Catch::Approx(0.8413447460685429).margin(1e-12));
  CHECK(normal_cdf(-1.0) == Catch::Approx(0.15865525393145707).margin(1e-12));
  CHECK(normal_cdf(1.0 / std::sqrt(2.0)) == Catch::Approx(0.7602499389065233).margin(1e-12));
  // deep tail, relative accuracy
  CHECK(normal_cdf(-8.0) == Catch::Approx(6.22096057427178e-16).epsilon(1e-10));
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-14));
  CHECK(normal_quantile(0.75) == Catch::Approx(0.6744897501960817).margin(1e-12));
  CHECK(normal_quantile(0.975) == Catch::Approx(1.959963984540054).margin(1e-11));
  CHECK(normal_quantile(0.995) == Catch::Approx(2.5758293035489004).margin(1e-11));
  CHECK(normal_quantile(0.9999) == Catch::Approx(3.719016485455709).margin(1e-10));
  for (double p : {1e-8, 1e-4, 0.1, 0.3, 0.9, 1.0 - 1e-6}) {
    CHECK(normal_cdf(normal_quantile(p)) == Catch::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("regularized incomplete gamma matches references") {
  CHECK(gamma_q(0.5, 0.5) == Catch::Approx(0.31731050786291115).epsilon(1e-12));
  CHECK(gamma_q(2.0, 1.0) == Catch::Approx(0.7357588823428847).epsilon(1e-12));
  CHECK(gamma_q(5.0, 10.0) == Catch::Approx(0.029252688076961124).epsilon(1e-11));
  CHECK(gamma_q(30.0, 25.0) == Catch::Approx(0.8178960840225449).epsilon(1e-11));
}

TEST_CASE("chi-square survival function") {
  CHECK(chi2_sf(1.0, 1) == Catch::Approx(0.31731050786291115).epsilon(1e-12));
  CHECK(chi2_sf(2.5, 3) == Catch::Approx(0.4752910833430205).epsilon(1e-12));
  CHECK(chi2_sf(10.0, 4) == Catch::Approx(0.04042768199451279).epsilon(1e-11));
  CHECK(chi2_sf(27.877, 13) == Catch::Approx(0.009414050310872247).epsilon(1e-10));
}

TEST_CASE("running moments") {
  RunningMoments acc;
  for (double v : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) acc.add(v);
  CHECK(acc.mean() == Catch::Approx(5.0));
  CHECK(acc.variance() == Catch::Approx(32.0 / 7.0));
}

TEST_CASE("chi2 gof accepts the true distribution and rejects a wrong one") {
  std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
  std::vector<long> fair{250, 248, 251, 251};
  auto ok = chi2_gof(fair, probs);
  CHECK(ok.df == 3);
  CHECK(ok.passes(0.01));

  std::vector<long> skew{400, 200, 200, 200};
  auto bad = chi2_gof(skew, probs);
  CHECK_FALSE(bad.passes(0.01));
}

TEST_CASE("chi2 two-sample pools rare categories") {
  std::vector<long> a{500, 480, 20, 1, 0};
  std::vector<long> b{510, 470, 18, 0, 1};
  auto r = chi2_two_sample(a, b);
  CHECK(r.df >= 1);
  CHECK(r.passes(0.01));
}
