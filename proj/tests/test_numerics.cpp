#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "physauth/numerics.hpp"
#include "physauth/rng.hpp"

using namespace physauth;

// Reference values computed offline with scipy.stats / scipy.special.

TEST_CASE("regularized incomplete gamma") {
  CHECK(gamma_p(0.5, 0.1) == doctest::Approx(0.34527915398142317).epsilon(1e-12));
  CHECK(gamma_p(5, 2) == doctest::Approx(0.052653017343711125).epsilon(1e-12));
  CHECK(gamma_p(10, 15) == doctest::Approx(0.9301463393005901).epsilon(1e-12));
  CHECK(gamma_p(100, 90) == doctest::Approx(0.15822098918643007).epsilon(1e-11));
  CHECK(gamma_p(3, 30) == doctest::Approx(0.9999999999549898).epsilon(1e-14));
  CHECK(gamma_p(2, 0) == 0.0);
}

TEST_CASE("central chi-square cdf and quantile") {
  CHECK(chi2_cdf(37.5, 20) == doctest::Approx(0.9898135566625967).epsilon(1e-12));
  CHECK(chi2_cdf(3.0, 2) == doctest::Approx(0.7768698398515702).epsilon(1e-12));
  CHECK(chi2_cdf(0.5, 10) == doctest::Approx(6.611710561034244e-06).epsilon(1e-10));
  CHECK(chi2_cdf(150.0, 100) == doctest::Approx(0.9990960679576459).epsilon(1e-12));
  CHECK(chi2_cdf(1e-3, 4) == doctest::Approx(1.2495834114479173e-07).epsilon(1e-10));

  CHECK(chi2_inv(0.99, 20) == doctest::Approx(37.56623478662507).epsilon(1e-11));
  CHECK(chi2_inv(0.99, 10) == doctest::Approx(23.209251158954356).epsilon(1e-11));
  CHECK(chi2_inv(0.95, 2) == doctest::Approx(5.991464547107979).epsilon(1e-11));
  CHECK(chi2_inv(0.5, 40) == doctest::Approx(39.33534484661134).epsilon(1e-11));
  CHECK(chi2_inv(0.999, 200) == doctest::Approx(267.5405278227572).epsilon(1e-11));
  CHECK(chi2_inv(0.01, 8) == doctest::Approx(1.6464973726907703).epsilon(1e-10));
  CHECK(chi2_inv(0.0, 6) == 0.0);

  CHECK_THROWS_AS(chi2_inv(1.0, 4), std::domain_error);
  CHECK_THROWS_AS(chi2_cdf(-1.0, 4), std::domain_error);
  CHECK_THROWS_AS(chi2_cdf(1.0, 0), std::domain_error);
}

TEST_CASE("chi-square quantile round trip") {
  for (unsigned k : {2u, 4u, 10u, 20u, 64u, 200u}) {
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.99, 0.999999}) {
      CHECK(std::abs(chi2_cdf(chi2_inv(p, k), k) - p) <= 1e-9);
    }
  }
}

TEST_CASE("noncentral chi-square cdf") {
  CHECK(noncentral_chi2_cdf(37.566, 20, 10) == doctest::Approx(0.8099196555580516).epsilon(1e-10));
  CHECK(noncentral_chi2_cdf(3.7566, 20, 20) == doctest::Approx(6.108456127739251e-09).epsilon(1e-7));
  CHECK(noncentral_chi2_cdf(20, 10, 5) == doctest::Approx(0.8017020282049135).epsilon(1e-10));
  CHECK(noncentral_chi2_cdf(500, 20, 400) == doctest::Approx(0.9720343654658335).epsilon(1e-10));
  CHECK(noncentral_chi2_cdf(5, 2, 0.5) == doctest::Approx(0.86524442909368).epsilon(1e-10));
  CHECK(noncentral_chi2_cdf(60, 40, 1e-3) == doctest::Approx(0.978119825265123).epsilon(1e-10));
  CHECK(noncentral_chi2_cdf(1000, 20, 1000) == doctest::Approx(0.38191111317854226).epsilon(1e-9));
  for (double x : {0.1, 5.0, 30.0}) CHECK(noncentral_chi2_cdf(x, 12, 0.0) == chi2_cdf(x, 12));
}

namespace {

HermitianMatrix random_pd(std::size_t n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  std::vector<cplx> b(n * n);
  for (auto& x : b) x = {nd(g), nd(g)};
  std::vector<cplx> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) a[i * n + j] += b[i * n + k] * std::conj(b[j * n + k]);
    }
    a[i * n + i] += 0.5;
  }
  return HermitianMatrix(n, a);
}

}  // namespace

TEST_CASE("cholesky reconstructs the matrix") {
  std::mt19937_64 g(21);
  for (std::size_t n : {1u, 2u, 5u, 10u, 24u}) {
    const HermitianMatrix a = cholesky(random_pd(n, g));
    const auto L = a.chol_lower();
    const auto U = a.chol_upper();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(U[i * n + i].imag() == 0.0);
      CHECK(U[i * n + i].real() > 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += L[i * n + k] * U[k * n + j];
        err = std::max(err, std::abs(acc - a(i, j)));
        if (j > i) CHECK(L[i * n + j] == cplx{});
      }
    }
    CHECK(err <= 1e-10 * a.max_abs());
  }
}

TEST_CASE("quadratic form and whitening agree with an explicit inverse") {
  std::mt19937_64 g(22);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 3u, 8u}) {
    const HermitianMatrix a = cholesky(random_pd(n, g));
    std::vector<cplx> d(n);
    for (auto& x : d) x = {nd(g), nd(g)};
    const std::vector<cplx> dense(a.entries().begin(), a.entries().end());
    const double want = oracle::quad_form_inverse(dense, d);
    CHECK(a.inv_quad_form(d) == doctest::Approx(want).epsilon(1e-10));

    std::vector<cplx> w(n), back(n);
    a.whiten(d, w);
    a.color(w, back);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(back[i] - d[i]) <= 1e-10);
  }
}

TEST_CASE("hermitian validation and factorization failures") {
  CHECK_THROWS_AS(HermitianMatrix(2, {1.0, cplx{0, 1}, cplx{0, 1}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(HermitianMatrix(2, {1.0, 0.0, 0.0}), std::invalid_argument);

  // Rank one: second pivot vanishes.
  const HermitianMatrix ones(2, {1.0, 1.0, 1.0, 1.0});
  try {
    (void)cholesky(ones);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot_index() == 1);
  }
  const HermitianMatrix i3 = HermitianMatrix::identity(3, 2.0);
  CHECK(i3(1, 1) == cplx{2.0});
  CHECK(i3(0, 2) == cplx{});
  CHECK_FALSE(i3.factored());
  CHECK_THROWS(i3.inv_quad_form(std::vector<cplx>(3, 1.0)));
}

TEST_CASE("whitened samples have covariance 2I") {
  std::mt19937_64 g(23);
  const std::size_t n = 6;
  const HermitianMatrix R = cholesky(random_pd(n, g));
  RngStream rng(5, 0);
  const std::size_t draws = 200000;
  std::vector<cplx> cov(n * n, 0.0), u(n), x(n), w(n);
  for (std::size_t t = 0; t < draws; ++t) {
    for (auto& v : u) v = sample_complex_gaussian(rng, 1.0);
    R.color(u, x);
    R.whiten(x, w);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) cov[i * n + j] += std::sqrt(2.0) * w[i] * std::conj(std::sqrt(2.0) * w[j]);
    }
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx want = i == j ? 2.0 : 0.0;
      num += std::norm(cov[i * n + j] / static_cast<double>(draws) - want);
      den += std::norm(want);
    }
  }
  CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 5; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  const RngStream root(42, 1);
  CHECK(root.split(3).stream() == root.split(3).stream());
  CHECK(root.split(3).stream() != root.split(4).stream());
  CHECK(root.split(0).stream() != RngStream(42, 2).split(0).stream());

  RngStream r(1, 1);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const cplx z = sample_complex_gaussian(r, 3.0);
    s += z.real();
    s2 += std::norm(z);
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(s2 / n == doctest::Approx(3.0).epsilon(0.02));
  CHECK_THROWS(sample_complex_gaussian(r, -1.0));

  RngStream u(9, 9);
  for (int i = 0; i < 1000; ++i) CHECK(u.uniform_index(7) < 7);
}

TEST_CASE("quantile near zero for one degree of freedom") {
  for (double p : {1e-12, 1e-8, 1e-4}) {
    const double x = chi2_inv(p, 1);
    CHECK(x > 0.0);
    CHECK(std::abs(chi2_cdf(x, 1) - p) <= 1e-9 * p + 1e-15);
  }
}
