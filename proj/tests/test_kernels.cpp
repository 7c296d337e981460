#include <doctest.h>

#include <random>
#include <vector>

#include "physauth/kernels.hpp"

namespace k = physauth::kernels;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(g), nd(g)};
  return v;
}

bool avx2_usable() { return k::avx2::compiled() && k::detected_backend() == k::Backend::Avx2; }

struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  std::mt19937_64 g(11);
  for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 16u, 33u}) {
    const auto a = random_vec(n, g);
    const auto b = random_vec(n, g);
    cplx u = 0.0, c = 0.0;
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      u += a[i] * b[i];
      c += std::conj(a[i]) * b[i];
      nn += std::norm(a[i]);
    }
    CHECK(std::abs(k::scalar::dotu(a.data(), b.data(), n) - u) <= 1e-12 * (1 + std::abs(u)));
    CHECK(std::abs(k::scalar::dotc(a.data(), b.data(), n) - c) <= 1e-12 * (1 + std::abs(c)));
    CHECK(k::scalar::norm2(a.data(), n) == doctest::Approx(nn).epsilon(1e-13));
  }
}

TEST_CASE("avx2 kernels agree with scalar references") {
  if (!avx2_usable()) {
    MESSAGE("AVX2 unavailable; equivalence test skipped");
    return;
  }
  std::mt19937_64 g(12);
  for (std::size_t n = 0; n < 41; ++n) {
    const auto a = random_vec(n, g);
    const auto b = random_vec(n, g);
    const cplx su = k::scalar::dotu(a.data(), b.data(), n);
    const cplx sc = k::scalar::dotc(a.data(), b.data(), n);
    const double sn = k::scalar::norm2(a.data(), n);
    const double scale = 1.0 + std::sqrt(sn * k::scalar::norm2(b.data(), n));
    CHECK(std::abs(k::avx2::dotu(a.data(), b.data(), n) - su) <= 1e-13 * scale);
    CHECK(std::abs(k::avx2::dotc(a.data(), b.data(), n) - sc) <= 1e-13 * scale);
    CHECK(std::abs(k::avx2::norm2(a.data(), n) - sn) <= 1e-13 * (1.0 + sn));

    std::vector<cplx> o1(n), o2(n);
    k::scalar::sub(a.data(), b.data(), o1.data(), n);
    k::avx2::sub(a.data(), b.data(), o2.data(), n);
    CHECK(o1 == o2);
  }
}

TEST_CASE("dispatch follows the selected backend") {
  BackendGuard guard;
  std::mt19937_64 g(13);
  const auto a = random_vec(9, g);
  const auto b = random_vec(9, g);

  CHECK(k::set_backend(k::Backend::Scalar) == k::Backend::Scalar);
  CHECK(k::dotc(a, b) == k::scalar::dotc(a.data(), b.data(), a.size()));
  CHECK(k::norm2(a) == k::scalar::norm2(a.data(), a.size()));

  const k::Backend got = k::set_backend(k::Backend::Avx2);
  if (avx2_usable()) {
    CHECK(got == k::Backend::Avx2);
    CHECK(k::dotc(a, b) == k::avx2::dotc(a.data(), b.data(), a.size()));
  } else {
    CHECK(got == k::Backend::Scalar);
  }
  CHECK(k::backend_name(k::Backend::Scalar) == "scalar");
}

TEST_CASE("sub allows aliasing and matvec matches row dots") {
  BackendGuard guard;
  std::mt19937_64 g(14);
  for (auto backend : {k::Backend::Scalar, k::Backend::Avx2}) {
    k::set_backend(backend);
    auto a = random_vec(13, g);
    const auto b = random_vec(13, g);
    auto expect = a;
    for (std::size_t i = 0; i < a.size(); ++i) expect[i] -= b[i];
    k::sub(a, b, a);
    CHECK(a == expect);

    const std::size_t rows = 5, cols = 7;
    const auto mat = random_vec(rows * cols, g);
    const auto x = random_vec(cols, g);
    std::vector<cplx> out(rows);
    k::matvec(mat, rows, x, out);
    for (std::size_t r = 0; r < rows; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) acc += mat[r * cols + c] * x[c];
      CHECK(std::abs(out[r] - acc) <= 1e-12 * (1.0 + std::abs(acc)));
    }
  }
}
