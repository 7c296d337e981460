#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "physauth/numerics.hpp"

namespace physauth {

namespace {

constexpr double kGammaEps = 1e-15;
constexpr int kGammaMaxIter = 200000;
constexpr double kPoissonTail = 1e-13;  // per side; total neglected mass < 1e-12

double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kGammaMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz).
double gamma_q_cf(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

double chi2_pdf(double x, unsigned k) {
  if (x <= 0.0) return k == 2 ? 0.5 : 0.0;
  const double h = 0.5 * k;
  return std::exp((h - 1.0) * std::log(x) - 0.5 * x - h * std::log(2.0) - log_gamma(h));
}

void check_dof(unsigned k) {
  if (k == 0) throw std::domain_error("chi-square: degrees of freedom must be >= 1");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be positive");
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::min(1.0, gamma_p_series(a, x));
  return std::max(0.0, 1.0 - gamma_q_cf(a, x));
}

double chi2_cdf(double x, unsigned k) {
  check_dof(k);
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("chi2_cdf: x must be >= 0");
  return gamma_p(0.5 * k, 0.5 * x);
}

double chi2_inv(double p, unsigned k) {
  check_dof(k);
  if (std::isnan(p) || p < 0.0 || p >= 1.0) {
    throw std::domain_error("chi2_inv: p must satisfy 0 <= p < 1");
  }
  if (p == 0.0) return 0.0;

  double lo = 0.0;
  double hi = k + 20.0 * std::sqrt(2.0 * k) + 100.0;
  while (chi2_cdf(hi, k) < p) {
    lo = hi;
    hi *= 2.0;
  }
  // Relative width: quantiles near zero (k = 1, tiny p) need it.
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, k) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    const double f = chi2_pdf(x, k);
    if (!(f > 0.0)) break;
    const double next = x - (chi2_cdf(x, k) - p) / f;
    if (next >= lo && next <= hi) x = next;
  }
  return x;
}

double noncentral_chi2_cdf(double x, unsigned k, double mu) {
  check_dof(k);
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("noncentral_chi2_cdf: x must be >= 0");
  if (mu < 0.0 || std::isnan(mu)) {
    throw std::domain_error("noncentral_chi2_cdf: noncentrality must be >= 0");
  }
  if (mu == 0.0) return chi2_cdf(x, k);
  if (x == 0.0) return 0.0;

  const double lambda = 0.5 * mu;
  const double half_x = 0.5 * x;
  const double half_k = 0.5 * k;
  const auto mode = static_cast<long>(std::floor(lambda));
  const double log_lambda = std::log(lambda);
  auto weight = [&](long j) {
    return std::exp(-lambda + j * log_lambda - log_gamma(static_cast<double>(j) + 1.0));
  };

  double sum = 0.0;
  // Upward from the mode. Beyond the mode the Poisson ratio lambda/(j+1) < 1,
  // so the remaining tail is bounded by w_j * (j+1) / (j+1-lambda).
  for (long j = mode;; ++j) {
    const double w = weight(j);
    sum += w * gamma_p(half_k + j, half_x);
    const double jp1 = static_cast<double>(j) + 1.0;
    if (jp1 > lambda && w * jp1 / (jp1 - lambda) < kPoissonTail) break;
  }
  // Downward; below the mode the ratio is j/lambda < 1.
  for (long j = mode - 1; j >= 0; --j) {
    const double w = weight(j);
    sum += w * gamma_p(half_k + j, half_x);
    if (w * lambda / (lambda - j) < kPoissonTail) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace physauth
