#pragma once

// Time-variant channel frequency responses: fixed part + WSSUS tapped-delay
// variable part with AR-1 tap dynamics + receiver noise.

#include <cstddef>
#include <limits>
#include <vector>

#include "physauth/numerics.hpp"
#include "physauth/rng.hpp"

namespace physauth {

/// Coherence bandwidth sentinel for variation that is flat across tones.
inline constexpr double kInfiniteBc = std::numeric_limits<double>::infinity();

struct ChannelParams {
  double f0 = 5e9;        ///< carrier, Hz
  double W = 10e6;        ///< measurement bandwidth, Hz
  std::size_t M = 10;     ///< tones
  double a = 0.9;         ///< AR-1 coefficient per probe interval
  double Bc = 2e6;        ///< coherence bandwidth, Hz; 0 or kInfiniteBc allowed
  double sigma_T = 0.0;   ///< std of the variable part
  double sigma_N2 = 0.0;  ///< per-tone noise variance
  double T = 0.0;         ///< probe interval, s (metadata; dynamics enter only via a)

  double delta_f() const { return W / static_cast<double>(M); }
  double delta_tau() const { return 1.0 / W; }
  double gamma() const;
  /// Frequency of tone m, 1 <= m <= M.
  double tone_frequency(std::size_t m) const;
  /// exp(-gamma * delta_tau): per-tap power decay; 1 at Bc = 0, 0 at Bc = inf.
  double tap_decay() const;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct TapState {
  CVector amps;                 ///< A_l[k]
  std::vector<double> profile;  ///< P_tau[l] = Var[A_l[k]]
  long k = 0;

  std::size_t taps() const { return profile.size(); }
};

struct FreqResponse {
  CVector samples;
  long k = 0;
};

enum class SpatialMode { IndependentVariation, FullyCorrelatedVariation };

/// Exponential power-delay profile truncated once the discarded tail power is
/// at most 1e-6 * sigma_T^2. Bc must be > 0; Bc = kInfiniteBc gives the
/// single-tap profile [sigma_T^2]. Amplitudes come back zeroed.
TapState build_delay_profile(const ChannelParams& params);

/// Alias taps modulo `tones`: tap r collects the power of taps r, r+M, r+2M...
/// Tones are spaced W/M apart and taps 1/W apart, so taps congruent mod M
/// reach every tone with the same relative phase and the folded line yields
/// the same tone-domain process (up to a per-tap phase that circular
/// symmetry absorbs).
TapState fold_profile(const TapState& state, std::size_t tones);

/// Profile the generator actually runs: the truncated profile when it fits in
/// M taps, otherwise the exact infinite profile folded onto M taps. Bc = 0
/// folds to a flat sigma_T^2/M profile (variation independent over tones).
TapState variation_profile(const ChannelParams& params);

/// Draw amps[l] ~ CN(0, profile[l]) independently (the AR-1 stationary law); k = 0.
TapState init_taps(const TapState& state, RngStream& rng);
void init_taps_inplace(TapState& state, RngStream& rng);

/// A_l[k] = a A_l[k-1] + sqrt((1-a^2) P[l]) u_l[k], u ~ CN(0,1).
TapState step_taps(const TapState& state, double a, RngStream& rng);
void step_taps_inplace(TapState& state, double a, RngStream& rng);

/// Tone x tap phasor table exp(-j 2 pi f_m l / W), row-major M x L.
class ToneBasis {
 public:
  ToneBasis(const ChannelParams& params, std::size_t taps);
  std::size_t tones() const { return tones_; }
  std::size_t taps() const { return taps_; }
  std::span<const cplx> table() const { return table_; }
  void apply(std::span<const cplx> amps, std::span<cplx> out) const;

 private:
  std::size_t tones_;
  std::size_t taps_;
  CVector table_;
};

/// epsilon_m = sum_l A_l exp(-j 2 pi f_m l / W), m = 1..M.
CVector taps_to_frequency(const TapState& state, const ChannelParams& params);

/// fixed + taps_to_frequency(state) + i.i.d. CN(0, sigma_N2) noise.
FreqResponse sample_response(std::span<const cplx> fixed, const TapState& state,
                             const ChannelParams& params, RngStream& rng);

/// Eve's variable part at Alice's time index: an independent stationary draw
/// with the same profile, or Alice's own taps when fully correlated.
TapState eve_variation(const TapState& alice_state, SpatialMode mode, RngStream& rng,
                       const ChannelParams& params);

/// One authentication round: Bob's stored probe H_A[k-1] and the two
/// candidate responses at time k.
struct ProbeTriple {
  CVector reference;  ///< H_A[k-1]
  CVector alice;      ///< H_A[k]
  CVector eve;        ///< H_E[k]
};

/// Draws independent authentication rounds end to end through the tap model.
class ProbeSimulator {
 public:
  ProbeSimulator(const ChannelParams& params, CVector fixed_alice, CVector fixed_eve,
                 SpatialMode mode);

  const ChannelParams& params() const { return params_; }
  void next(RngStream& rng, ProbeTriple& out);

 private:
  void compose(std::span<const cplx> fixed, std::span<const cplx> variation, RngStream& rng,
               CVector& out);

  ChannelParams params_;
  CVector fixed_alice_;
  CVector fixed_eve_;
  SpatialMode mode_;
  TapState alice_;
  TapState eve_;
  ToneBasis basis_;
  CVector eps_;
};

}  // namespace physauth
