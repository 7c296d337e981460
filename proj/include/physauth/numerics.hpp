#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace physauth {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Chi-square family
// ---------------------------------------------------------------------------

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// CDF of the central chi-square distribution with k degrees of freedom.
/// Throws std::domain_error for x < 0 or k == 0.
double chi2_cdf(double x, unsigned k);

/// Quantile: the x with chi2_cdf(x, k) == p. Requires 0 <= p < 1; p >= 1
/// would be an infinite threshold and is a domain error.
double chi2_inv(double p, unsigned k);

/// Noncentral chi-square CDF with k dof and noncentrality mu, evaluated as a
/// Poisson(mu/2) mixture of central CDFs. The sum starts at the modal index
/// and stops once the neglected Poisson mass is below 1e-12.
double noncentral_chi2_cdf(double x, unsigned k, double mu);

// ---------------------------------------------------------------------------
// Hermitian matrices
// ---------------------------------------------------------------------------

class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t pivot_index, double pivot);
  std::size_t pivot_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Dense M x M complex Hermitian matrix, optionally carrying its Cholesky
/// factor R = R_d^H R_d. Immutable once built.
///
/// The factor is stored as the lower triangle L = R_d^H (row-major) so that
/// forward substitution walks contiguous rows. `chol_upper()` returns R_d.
class HermitianMatrix {
 public:
  /// `entries` is row-major, dim*dim. Rejects inputs whose deviation from
  /// Hermitian symmetry exceeds 1e-12 * max|entry|; smaller deviations are
  /// projected away (upper triangle wins, diagonal made real).
  HermitianMatrix(std::size_t dim, std::vector<cplx> entries);

  static HermitianMatrix identity(std::size_t dim, double scale = 1.0);
  static HermitianMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }
  cplx operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  std::span<const cplx> entries() const noexcept { return entries_; }
  double max_abs() const noexcept;

  bool factored() const noexcept { return !lower_.empty(); }
  /// R_d, upper triangular with positive real diagonal (row-major, dim*dim).
  std::vector<cplx> chol_upper() const;
  /// R_d^H, lower triangular (row-major, dim*dim).
  std::span<const cplx> chol_lower() const;

  /// out = (R_d^H)^{-1} d, by forward substitution.
  void whiten(std::span<const cplx> d, std::span<cplx> out) const;
  /// d^H R^{-1} d = |(R_d^H)^{-1} d|^2, never via an explicit inverse.
  double inv_quad_form(std::span<const cplx> d) const;
  /// out = R_d^H u; if u ~ CN(0, I) then out ~ CN(0, R).
  void color(std::span<const cplx> u, std::span<cplx> out) const;

 private:
  friend HermitianMatrix cholesky(const HermitianMatrix& a);

  std::size_t dim_;
  std::vector<cplx> entries_;
  std::vector<cplx> lower_;
};

/// Copy of `a` with its Cholesky factor populated. Throws NotPositiveDefinite
/// if a pivot falls to 1e-14 * max diagonal or below.
HermitianMatrix cholesky(const HermitianMatrix& a);

}  // namespace physauth
