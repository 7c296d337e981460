#include "physauth/kernels.hpp"

#include <atomic>
#include <cassert>

namespace physauth::kernels {

namespace {

struct Table {
  cplx (*dotu)(const cplx*, const cplx*, std::size_t) noexcept;
  cplx (*dotc)(const cplx*, const cplx*, std::size_t) noexcept;
  double (*norm2)(const cplx*, std::size_t) noexcept;
  void (*sub)(const cplx*, const cplx*, cplx*, std::size_t) noexcept;
};

constexpr Table kScalar{scalar::dotu, scalar::dotc, scalar::norm2, scalar::sub};
constexpr Table kAvx2{avx2::dotu, avx2::dotc, avx2::norm2, avx2::sub};

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const Table*>& table() {
  static std::atomic<const Table*> t{cpu_has_avx2() ? &kAvx2 : &kScalar};
  return t;
}

}  // namespace

Backend detected_backend() noexcept { return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar; }

Backend active_backend() noexcept {
  return table().load(std::memory_order_relaxed) == &kAvx2 ? Backend::Avx2 : Backend::Scalar;
}

Backend set_backend(Backend b) noexcept {
  const Table* t = (b == Backend::Avx2 && cpu_has_avx2()) ? &kAvx2 : &kScalar;
  table().store(t, std::memory_order_relaxed);
  return active_backend();
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

cplx dotu(std::span<const cplx> a, std::span<const cplx> b) noexcept {
  assert(a.size() == b.size());
  return table().load(std::memory_order_relaxed)->dotu(a.data(), b.data(), a.size());
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) noexcept {
  assert(a.size() == b.size());
  return table().load(std::memory_order_relaxed)->dotc(a.data(), b.data(), a.size());
}

double norm2(std::span<const cplx> a) noexcept {
  return table().load(std::memory_order_relaxed)->norm2(a.data(), a.size());
}

void sub(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) noexcept {
  assert(a.size() == b.size() && out.size() == a.size());
  table().load(std::memory_order_relaxed)->sub(a.data(), b.data(), out.data(), a.size());
}

void matvec(std::span<const cplx> mat, std::size_t rows, std::span<const cplx> x,
            std::span<cplx> out) noexcept {
  const std::size_t cols = x.size();
  assert(mat.size() == rows * cols && out.size() == rows);
  const Table* t = table().load(std::memory_order_relaxed);
  for (std::size_t r = 0; r < rows; ++r) out[r] = t->dotu(mat.data() + r * cols, x.data(), cols);
}

}  // namespace physauth::kernels
