#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "physauth/kernels.hpp"
#include "physauth/numerics.hpp"

namespace physauth {

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot_index, double pivot)
    : std::runtime_error("matrix is not positive definite (pivot " + std::to_string(pivot_index) +
                         " = " + std::to_string(pivot) + ")"),
      index_(pivot_index) {}

HermitianMatrix::HermitianMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0) throw std::invalid_argument("HermitianMatrix: dimension must be >= 1");
  if (entries_.size() != dim_ * dim_) {
    throw std::invalid_argument("HermitianMatrix: entry count does not match dim*dim");
  }
  const double tol = 1e-12 * std::max(max_abs(), std::numeric_limits<double>::min());
  for (std::size_t m = 0; m < dim_; ++m) {
    for (std::size_t n = m; n < dim_; ++n) {
      const cplx upper = entries_[m * dim_ + n];
      const cplx lower = entries_[n * dim_ + m];
      if (std::abs(upper - std::conj(lower)) > tol) {
        throw std::invalid_argument("HermitianMatrix: entries are not Hermitian at (" +
                                    std::to_string(m) + "," + std::to_string(n) + ")");
      }
      if (m == n) {
        entries_[m * dim_ + m] = upper.real();
      } else {
        entries_[n * dim_ + m] = std::conj(upper);
      }
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim, double scale) {
  std::vector<cplx> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = scale;
  return HermitianMatrix(dim, std::move(e));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  const std::size_t dim = diag.size();
  std::vector<cplx> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = diag[i];
  return HermitianMatrix(dim, std::move(e));
}

double HermitianMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const cplx& v : entries_) m = std::max(m, std::abs(v));
  return m;
}

std::span<const cplx> HermitianMatrix::chol_lower() const {
  if (!factored()) throw std::logic_error("HermitianMatrix: not factored");
  return lower_;
}

std::vector<cplx> HermitianMatrix::chol_upper() const {
  const auto low = chol_lower();
  std::vector<cplx> up(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) up[j * dim_ + i] = std::conj(low[i * dim_ + j]);
  }
  return up;
}

void HermitianMatrix::whiten(std::span<const cplx> d, std::span<cplx> out) const {
  const auto low = chol_lower();
  if (d.size() != dim_ || out.size() != dim_) {
    throw std::invalid_argument("HermitianMatrix::whiten: dimension mismatch");
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const cplx acc = kernels::dotu(low.subspan(i * dim_, i), out.first(i));
    out[i] = (d[i] - acc) / low[i * dim_ + i].real();
  }
}

double HermitianMatrix::inv_quad_form(std::span<const cplx> d) const {
  CVector y(dim_);
  whiten(d, y);
  return kernels::norm2(y);
}

void HermitianMatrix::color(std::span<const cplx> u, std::span<cplx> out) const {
  const auto low = chol_lower();
  if (u.size() != dim_ || out.size() != dim_) {
    throw std::invalid_argument("HermitianMatrix::color: dimension mismatch");
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = kernels::dotu(low.subspan(i * dim_, i + 1), u.first(i + 1));
  }
}

HermitianMatrix cholesky(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i).real());
  const double floor = 1e-14 * max_diag;

  std::vector<cplx> low(n * n, 0.0);
  std::span<const cplx> lv(low);
  for (std::size_t j = 0; j < n; ++j) {
    const auto row_j = lv.subspan(j * n, j);
    const double pivot = a(j, j).real() - kernels::norm2(row_j);
    if (!(pivot > floor)) throw NotPositiveDefinite(j, pivot);
    const double ljj = std::sqrt(pivot);
    low[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      // sum_k L_ik conj(L_jk)
      const cplx s = kernels::dotc(row_j, lv.subspan(i * n, j));
      low[i * n + j] = (a(i, j) - s) / ljj;
    }
  }
  HermitianMatrix out = a;
  out.lower_ = std::move(low);
  return out;
}

}  // namespace physauth
