#pragma once

// Complex inner-loop kernels. Every kernel has a portable scalar reference
// and, on x86-64, an AVX2/FMA variant picked once at startup. Callers go
// through the free functions below; tests may pin a backend explicitly.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace physauth::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

/// Backend used by the dispatching entry points.
Backend active_backend() noexcept;

/// Best backend the running CPU supports.
Backend detected_backend() noexcept;

/// Force a backend (tests, benchmarking). Requesting Avx2 on a CPU without
/// it falls back to Scalar; the return value is what is now active.
Backend set_backend(Backend b) noexcept;

std::string_view backend_name(Backend b) noexcept;

// sum_i a[i] * b[i]   (no conjugation)
cplx dotu(std::span<const cplx> a, std::span<const cplx> b) noexcept;
// sum_i conj(a[i]) * b[i]
cplx dotc(std::span<const cplx> a, std::span<const cplx> b) noexcept;
// sum_i |a[i]|^2
double norm2(std::span<const cplx> a) noexcept;
// out[i] = a[i] - b[i]; out may alias a or b
void sub(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) noexcept;
// out[r] = sum_c mat[r*cols + c] * x[c], mat row-major rows x cols
void matvec(std::span<const cplx> mat, std::size_t rows, std::span<const cplx> x,
            std::span<cplx> out) noexcept;

namespace scalar {
cplx dotu(const cplx* a, const cplx* b, std::size_t n) noexcept;
cplx dotc(const cplx* a, const cplx* b, std::size_t n) noexcept;
double norm2(const cplx* a, std::size_t n) noexcept;
void sub(const cplx* a, const cplx* b, cplx* out, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
bool compiled() noexcept;
cplx dotu(const cplx* a, const cplx* b, std::size_t n) noexcept;
cplx dotc(const cplx* a, const cplx* b, std::size_t n) noexcept;
double norm2(const cplx* a, std::size_t n) noexcept;
void sub(const cplx* a, const cplx* b, cplx* out, std::size_t n) noexcept;
}  // namespace avx2

}  // namespace physauth::kernels
