#include "physauth/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define PHYSAUTH_HAVE_AVX2 1
#else
#define PHYSAUTH_HAVE_AVX2 0
#endif

namespace physauth::kernels::avx2 {

#if PHYSAUTH_HAVE_AVX2

namespace {

// One __m256d holds two complex doubles laid out [re0 im0 re1 im1].
inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline void hsum_pairs(__m256d v, double& even, double& odd) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  even = t[0] + t[2];
  odd = t[1] + t[3];
}

}  // namespace

bool compiled() noexcept { return true; }

cplx dotu(const cplx* a, const cplx* b, std::size_t n) noexcept {
  // p = a * re(b) -> [ar*br, ai*br], q = a * im(b) -> [ar*bi, ai*bi]
  // re = sum(ar*br) - sum(ai*bi), im = sum(ai*br) + sum(ar*bi)
  __m256d p = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    p = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), p);
    q = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0xF), q);
  }
  double p_even, p_odd, q_even, q_odd;
  hsum_pairs(p, p_even, p_odd);
  hsum_pairs(q, q_even, q_odd);
  double re = p_even - q_odd;
  double im = p_odd + q_even;
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx dotc(const cplx* a, const cplx* b, std::size_t n) noexcept {
  // re = sum(ar*br) + sum(ai*bi), im = sum(ar*bi) - sum(ai*br)
  __m256d p = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    p = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), p);
    q = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0xF), q);
  }
  double p_even, p_odd, q_even, q_odd;
  hsum_pairs(p, p_even, p_odd);
  hsum_pairs(q, q_even, q_odd);
  double re = p_even + q_odd;
  double im = q_even - p_odd;
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double norm2(const cplx* a, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    acc = _mm256_fmadd_pd(va, va, acc);
  }
  double even, odd;
  hsum_pairs(acc, even, odd);
  double s = even + odd;
  for (; i < n; ++i) s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return s;
}

void sub(const cplx* a, const cplx* b, cplx* out, std::size_t n) noexcept {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(raw(out + i),
                     _mm256_sub_pd(_mm256_loadu_pd(raw(a + i)), _mm256_loadu_pd(raw(b + i))));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

#else

bool compiled() noexcept { return false; }
cplx dotu(const cplx* a, const cplx* b, std::size_t n) noexcept { return scalar::dotu(a, b, n); }
cplx dotc(const cplx* a, const cplx* b, std::size_t n) noexcept { return scalar::dotc(a, b, n); }
double norm2(const cplx* a, std::size_t n) noexcept { return scalar::norm2(a, n); }
void sub(const cplx* a, const cplx* b, cplx* out, std::size_t n) noexcept {
  scalar::sub(a, b, out, n);
}

#endif

}  // namespace physauth::kernels::avx2
