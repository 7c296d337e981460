#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "physauth/stats.hpp"

using namespace physauth;

namespace {

ChannelParams params(double Bc, double a = 0.9) {
  ChannelParams p;
  p.W = 10e6;
  p.M = 6;
  p.a = a;
  p.Bc = Bc;
  p.sigma_T = 0.8;
  p.sigma_N2 = 0.1;
  return p;
}

double max_diff(const HermitianMatrix& m, const std::vector<cplx>& ref) {
  REQUIRE(m.entries().size() == ref.size());
  double d = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) d = std::max(d, std::abs(m.entries()[i] - ref[i]));
  return d;
}

double max_diff(const HermitianMatrix& m, const HermitianMatrix& ref) {
  return max_diff(m, std::vector<cplx>(ref.entries().begin(), ref.entries().end()));
}

}  // namespace

TEST_CASE("R matches the tap-model covariance summed over taps") {
  for (double Bc : {0.2e6, 1e6, 2e6, 8e6}) {
    const ChannelParams p = params(Bc);
    const auto ref = oracle::tap_sum_R(p.M, p.W, Bc, p.a, p.sigma_T * p.sigma_T, p.sigma_N2);
    CHECK(max_diff(covariance_R(p), ref) < 1e-12);
  }
}

TEST_CASE("R is Hermitian Toeplitz with the stated diagonal") {
  const ChannelParams p = params(2e6);
  const HermitianMatrix R = covariance_R(p);
  CHECK(R.factored());
  for (std::size_t m = 0; m < p.M; ++m) {
    CHECK(R(m, m).real() == doctest::Approx(2 * 0.1 * 0.64 + 0.2));
    for (std::size_t n = 0; n < p.M; ++n) {
      CHECK(std::abs(R(m, n) - std::conj(R(n, m))) == 0.0);
      if (m > 0 && n > 0) CHECK(std::abs(R(m, n) - R(m - 1, n - 1)) < 1e-15);
      CHECK(R(m, n) == r_lag(static_cast<long>(m) - static_cast<long>(n), p));
    }
  }
  CHECK_THROWS_AS(r_lag(static_cast<long>(p.M), p), std::out_of_range);
}

TEST_CASE("G equals the covariance of an independent stationary draw minus the probe") {
  // Tap-sum oracle with a = 0 doubles the variation power; add noise twice.
  for (double Bc : {0.5e6, 2e6}) {
    const ChannelParams p = params(Bc);
    const auto ref = oracle::tap_sum_R(p.M, p.W, Bc, 0.0, p.sigma_T * p.sigma_T, p.sigma_N2);
    CHECK(max_diff(covariance_G(p), ref) < 1e-12);
  }
}

TEST_CASE("a = 1 leaves only measurement noise in R") {
  const ChannelParams p = params(2e6, 1.0);
  const HermitianMatrix R = covariance_R(p);
  const HermitianMatrix noise = HermitianMatrix::identity(p.M, 2 * p.sigma_N2);
  for (std::size_t i = 0; i < p.M * p.M; ++i) {
    CHECK(std::abs(R.entries()[i] - noise.entries()[i]) <= 1e-12);
  }
  // G stays finite at a = 1.
  const HermitianMatrix G = covariance_G(p);
  CHECK(std::isfinite(G(0, 1).real()));
}

TEST_CASE("asymptotic forms are the coherence-bandwidth limits") {
  const ChannelParams lo = params(0.0);
  CHECK(max_diff(covariance_R(lo), asymptotic_R_low_bc(lo)) < 1e-15);
  CHECK(max_diff(covariance_G(lo), asymptotic_G_low_bc(lo)) < 1e-15);

  const ChannelParams hi = params(kInfiniteBc);
  const HermitianMatrix Rh = asymptotic_R_high_bc(hi);
  CHECK(max_diff(covariance_R(hi), Rh) < 1e-15);
  CHECK(Rh(0, 1).real() == doctest::Approx(2 * 0.1 * 0.64));
  CHECK(asymptotic_G_high_bc(hi)(2, 3).real() == doctest::Approx(2 * 0.64));

  // Very large but finite Bc approaches the limit.
  const ChannelParams near = params(1e12);
  CHECK(max_diff(covariance_R(near), Rh) < 1e-5);
}

TEST_CASE("build_covariance dispatch and degenerate G") {
  const ChannelParams p = params(2e6);
  CHECK(build_covariance(CovarianceKind::GeneralR, p)(0, 1) == covariance_R(p)(0, 1));
  CHECK(build_covariance(CovarianceKind::HighBcG, p)(0, 1) == asymptotic_G_high_bc(p)(0, 1));

  ChannelParams flat = params(kInfiniteBc);
  flat.sigma_N2 = 0.0;
  CHECK_FALSE(covariance_G(flat).factored());
  CHECK_THROWS_AS(covariance_R(flat), NotPositiveDefinite);
}
