#include "physauth/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace physauth {

namespace {

// 2 sigma_T^2 (1-q) / (1 - q e^{-j 2 pi m / M}); m != 0 (mod M).
cplx variation_lag(long m, const ChannelParams& p) {
  const double power = p.sigma_T * p.sigma_T;
  if (power == 0.0) return 0.0;
  const double q = p.tap_decay();
  const double phase = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(p.M);
  return 2.0 * power * (1.0 - q) / (1.0 - q * std::polar(1.0, phase));
}

void check_lag(long m, const ChannelParams& p) {
  const long bound = static_cast<long>(p.M) - 1;
  if (m < -bound || m > bound) throw std::out_of_range("lag outside [1-M, M-1]");
}

template <class Entry>
HermitianMatrix toeplitz(std::size_t dim, Entry entry) {
  std::vector<cplx> e(dim * dim);
  for (std::size_t m = 0; m < dim; ++m) {
    for (std::size_t n = 0; n < dim; ++n) {
      e[m * dim + n] = entry(static_cast<long>(m) - static_cast<long>(n));
    }
  }
  return HermitianMatrix(dim, std::move(e));
}

HermitianMatrix factor_if_possible(HermitianMatrix m) {
  try {
    return cholesky(m);
  } catch (const NotPositiveDefinite&) {
    return m;
  }
}

}  // namespace

cplx r_lag(long m, const ChannelParams& params) {
  params.validate();
  check_lag(m, params);
  const double power = params.sigma_T * params.sigma_T;
  if (m == 0) return 2.0 * (1.0 - params.a) * power + 2.0 * params.sigma_N2;
  return (1.0 - params.a) * variation_lag(m, params);
}

cplx g_lag(long m, const ChannelParams& params) {
  params.validate();
  check_lag(m, params);
  if (m == 0) return 2.0 * params.sigma_T * params.sigma_T + 2.0 * params.sigma_N2;
  return variation_lag(m, params);
}

HermitianMatrix covariance_R(const ChannelParams& params) {
  params.validate();
  return cholesky(toeplitz(params.M, [&](long d) { return r_lag(d, params); }));
}

HermitianMatrix covariance_G(const ChannelParams& params) {
  params.validate();
  return factor_if_possible(toeplitz(params.M, [&](long d) { return g_lag(d, params); }));
}

HermitianMatrix asymptotic_R_low_bc(const ChannelParams& p) {
  p.validate();
  return cholesky(HermitianMatrix::identity(
      p.M, 2.0 * (1.0 - p.a) * p.sigma_T * p.sigma_T + 2.0 * p.sigma_N2));
}

HermitianMatrix asymptotic_G_low_bc(const ChannelParams& p) {
  p.validate();
  return factor_if_possible(
      HermitianMatrix::identity(p.M, 2.0 * p.sigma_T * p.sigma_T + 2.0 * p.sigma_N2));
}

HermitianMatrix asymptotic_R_high_bc(const ChannelParams& p) {
  p.validate();
  const double flat = 2.0 * (1.0 - p.a) * p.sigma_T * p.sigma_T;
  return cholesky(toeplitz(p.M, [&](long d) { return d == 0 ? flat + 2.0 * p.sigma_N2 : flat; }));
}

HermitianMatrix asymptotic_G_high_bc(const ChannelParams& p) {
  p.validate();
  const double flat = 2.0 * p.sigma_T * p.sigma_T;
  return factor_if_possible(
      toeplitz(p.M, [&](long d) { return cplx(d == 0 ? flat + 2.0 * p.sigma_N2 : flat); }));
}

HermitianMatrix build_covariance(CovarianceKind kind, const ChannelParams& params) {
  switch (kind) {
    case CovarianceKind::GeneralR: return covariance_R(params);
    case CovarianceKind::GeneralG: return covariance_G(params);
    case CovarianceKind::LowBcR: return asymptotic_R_low_bc(params);
    case CovarianceKind::LowBcG: return asymptotic_G_low_bc(params);
    case CovarianceKind::HighBcR: return asymptotic_R_high_bc(params);
    case CovarianceKind::HighBcG: return asymptotic_G_high_bc(params);
  }
  throw std::invalid_argument("build_covariance: unknown kind");
}

}  // namespace physauth
