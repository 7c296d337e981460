#include "physauth/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace physauth {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(seed_, mix(stream_ ^ mix(index + 0x5851f42d4c957f2dULL)));
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be >= 1");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

std::complex<double> sample_complex_gaussian(RngStream& rng, double variance) {
  if (variance < 0.0) throw std::domain_error("sample_complex_gaussian: negative variance");
  // Always consume two normals so stream alignment does not depend on variance.
  const double s = std::sqrt(0.5 * variance);
  const double re = rng.normal();
  const double im = rng.normal();
  return {s * re, s * im};
}

}  // namespace physauth
