#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace physauth {

/// Reproducible random stream keyed by (seed, stream id).
///
/// The same key always yields the same sequence. Distinct stream ids are
/// seeded through std::seed_seq, which decorrelates the resulting engines;
/// parallel workers each get their own id. Single-owner, not thread-safe.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Child stream for work unit `index`; deterministic in (seed, stream, index).
  RngStream split(std::uint64_t index) const;

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, n), n >= 1, without modulo bias.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// CN(0, variance): real and imaginary parts i.i.d. N(0, variance/2).
std::complex<double> sample_complex_gaussian(RngStream& rng, double variance);

}  // namespace physauth
