#pragma once

// Scalar statistics: normal CDF/quantile, regularized incomplete gamma,
// chi-square tail probabilities, running moments, and small chi-square
// goodness-of-fit helpers used by the statistical harness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "abmlab/errors.hpp"

namespace abmlab {

// Standard normal CDF via the complementary error function.
// Relative accuracy is that of std::erfc (~1e-15), good deep into the tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Inverse standard normal CDF. Acklam's rational approximation refined by one
// Halley step against normal_cdf, which brings it to ~1e-14 absolute.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction (x >= a+1).
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// Survival function of the chi-square distribution with k degrees of freedom.
inline double chi2_sf(double x, int k) { return gamma_q(0.5 * k, 0.5 * x); }

// Running mean/variance accumulator (Welford).
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  long count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Chi2Result {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool passes(double alpha) const { return p_value > alpha; }
};

namespace detail {

// Pool low-expectation cells into their right neighbor (wrapping the last
// into the previous) so the chi-square approximation is usable.
inline void pool_cells(std::vector<double>& expected, std::vector<double>& observed,
                       double min_expected) {
  for (std::size_t i = 0; i + 1 < expected.size();) {
    if (expected[i] < min_expected) {
      expected[i + 1] += expected[i];
      observed[i + 1] += observed[i];
      expected.erase(expected.begin() + static_cast<long>(i));
      observed.erase(observed.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  while (expected.size() > 1 && expected.back() < min_expected) {
    expected[expected.size() - 2] += expected.back();
    observed[observed.size() - 2] += observed.back();
    expected.pop_back();
    observed.pop_back();
  }
}

}  // namespace detail

// One-sample chi-square against known cell probabilities.
inline Chi2Result chi2_gof(std::span<const long> observed, std::span<const double> probs,
                           double min_expected = 5.0) {
  if (observed.size() != probs.size() || observed.empty()) {
    throw ValidationError("chi2_gof: size mismatch");
  }
  long n = 0;
  for (long o : observed) n += o;
  std::vector<double> exp_cells, obs_cells;
  exp_cells.reserve(observed.size());
  obs_cells.reserve(observed.size());
  for (std::size_t i = 0; i < observed.size(); ++i) {
    exp_cells.push_back(probs[i] * static_cast<double>(n));
    obs_cells.push_back(static_cast<double>(observed[i]));
  }
  detail::pool_cells(exp_cells, obs_cells, min_expected);
  Chi2Result r;
  r.df = static_cast<int>(exp_cells.size()) - 1;
  for (std::size_t i = 0; i < exp_cells.size(); ++i) {
    double diff = obs_cells[i] - exp_cells[i];
    r.statistic += diff * diff / exp_cells[i];
  }
  r.p_value = r.df > 0 ? chi2_sf(r.statistic, r.df) : 1.0;
  return r;
}

// Two-sample chi-square homogeneity test over shared categories.
inline Chi2Result chi2_two_sample(std::span<const long> a, std::span<const long> b,
                                  double min_expected = 5.0) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("chi2_two_sample: size mismatch");
  }
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  // Pool on the combined counts, carrying both samples along.
  std::vector<double> ca, cb, tot;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca.push_back(static_cast<double>(a[i]));
    cb.push_back(static_cast<double>(b[i]));
    tot.push_back(ca.back() + cb.back());
  }
  for (std::size_t i = 0; i + 1 < tot.size();) {
    double scale = std::min(na, nb) / (na + nb);
    if (tot[i] * scale < min_expected) {
      tot[i + 1] += tot[i];
      ca[i + 1] += ca[i];
      cb[i + 1] += cb[i];
      tot.erase(tot.begin() + static_cast<long>(i));
      ca.erase(ca.begin() + static_cast<long>(i));
      cb.erase(cb.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  while (tot.size() > 1 && tot.back() * std::min(na, nb) / (na + nb) < min_expected) {
    tot[tot.size() - 2] += tot.back();
    ca[ca.size() - 2] += ca.back();
    cb[cb.size() - 2] += cb.back();
    tot.pop_back();
    ca.pop_back();
    cb.pop_back();
  }
  Chi2Result r;
  r.df = static_cast<int>(tot.size()) - 1;
  for (std::size_t i = 0; i < tot.size(); ++i) {
    double ea = tot[i] * na / (na + nb);
    double eb = tot[i] * nb / (na + nb);
    if (ea > 0) r.statistic += (ca[i] - ea) * (ca[i] - ea) / ea;
    if (eb > 0) r.statistic += (cb[i] - eb) * (cb[i] - eb) / eb;
  }
  r.p_value = r.df > 0 ? chi2_sf(r.statistic, r.df) : 1.0;
  return r;
}

}  // namespace abmlab
