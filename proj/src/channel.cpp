#include "physauth/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "physauth/kernels.hpp"

namespace physauth {

namespace {

constexpr double kTailFraction = 1e-6;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("ChannelParams: ") + what);
}

}  // namespace

double ChannelParams::gamma() const { return 2.0 * std::numbers::pi * Bc; }

double ChannelParams::tone_frequency(std::size_t m) const {
  return f0 - 0.5 * W + static_cast<double>(m) * delta_f();
}

double ChannelParams::tap_decay() const {
  if (std::isinf(Bc)) return 0.0;
  return std::exp(-gamma() * delta_tau());
}

void ChannelParams::validate() const {
  require(std::isfinite(f0) && f0 > 0.0, "f0 must be > 0");
  require(std::isfinite(W) && W > 0.0, "W must be > 0");
  require(M >= 1, "M must be >= 1");
  require(a >= 0.0 && a <= 1.0, "a must lie in [0, 1]");
  require(Bc >= 0.0, "Bc must be >= 0");
  require(std::isfinite(sigma_T) && sigma_T >= 0.0, "sigma_T must be >= 0");
  require(std::isfinite(sigma_N2) && sigma_N2 >= 0.0, "sigma_N2 must be >= 0");
  require(T >= 0.0, "T must be >= 0");
}

TapState build_delay_profile(const ChannelParams& params) {
  params.validate();
  const double power = params.sigma_T * params.sigma_T;
  TapState s;
  if (power == 0.0) {
    s.profile = {0.0};
  } else if (std::isinf(params.Bc)) {
    s.profile = {power};
  } else {
    if (params.Bc == 0.0) {
      throw std::invalid_argument(
          "build_delay_profile: Bc = 0 has no finite delay line; use variation_profile");
    }
    const double q = params.tap_decay();
    std::size_t taps = 1;
    if (q > 0.0) {
      taps = static_cast<std::size_t>(std::ceil(std::log(kTailFraction) / std::log(q)));
      taps = std::max<std::size_t>(taps, 1);
    }
    s.profile.resize(taps);
    double w = power * (1.0 - q);
    for (std::size_t l = 0; l < taps; ++l) {
      s.profile[l] = w;
      w *= q;
    }
  }
  s.amps.assign(s.profile.size(), 0.0);
  return s;
}

TapState fold_profile(const TapState& state, std::size_t tones) {
  if (tones == 0) throw std::invalid_argument("fold_profile: tones must be >= 1");
  if (state.taps() <= tones) return state;
  TapState out;
  out.profile.assign(tones, 0.0);
  for (std::size_t l = 0; l < state.taps(); ++l) out.profile[l % tones] += state.profile[l];
  out.amps.assign(tones, 0.0);
  out.k = state.k;
  return out;
}

TapState variation_profile(const ChannelParams& params) {
  params.validate();
  const double power = params.sigma_T * params.sigma_T;
  const std::size_t tones = params.M;
  if (power == 0.0 || std::isinf(params.Bc)) return build_delay_profile(params);

  TapState s;
  if (params.Bc == 0.0) {
    s.profile.assign(tones, power / static_cast<double>(tones));
  } else {
    const double q = params.tap_decay();
    const std::size_t truncated =
        q > 0.0 ? static_cast<std::size_t>(std::ceil(std::log(kTailFraction) / std::log(q))) : 1;
    if (truncated <= tones) return build_delay_profile(params);
    // sum_p q^(r + pM) = q^r / (1 - q^M)
    const double norm = power * (1.0 - q) / (1.0 - std::pow(q, static_cast<double>(tones)));
    s.profile.resize(tones);
    for (std::size_t r = 0; r < tones; ++r) {
      s.profile[r] = norm * std::pow(q, static_cast<double>(r));
    }
  }
  s.amps.assign(s.profile.size(), 0.0);
  return s;
}

void init_taps_inplace(TapState& state, RngStream& rng) {
  state.amps.resize(state.profile.size());
  for (std::size_t l = 0; l < state.profile.size(); ++l) {
    state.amps[l] = sample_complex_gaussian(rng, state.profile[l]);
  }
  state.k = 0;
}

TapState init_taps(const TapState& state, RngStream& rng) {
  TapState out = state;
  init_taps_inplace(out, rng);
  return out;
}

void step_taps_inplace(TapState& state, double a, RngStream& rng) {
  if (state.amps.size() != state.profile.size()) {
    throw std::invalid_argument("step_taps: taps not initialized");
  }
  const double innovation = 1.0 - a * a;
  for (std::size_t l = 0; l < state.profile.size(); ++l) {
    state.amps[l] = a * state.amps[l] + sample_complex_gaussian(rng, innovation * state.profile[l]);
  }
  ++state.k;
}

TapState step_taps(const TapState& state, double a, RngStream& rng) {
  TapState out = state;
  step_taps_inplace(out, a, rng);
  return out;
}

ToneBasis::ToneBasis(const ChannelParams& params, std::size_t taps)
    : tones_(params.M), taps_(taps), table_(params.M * taps) {
  // f_m l / W = l (f0/W - 1/2) + m l / M, reduced mod 1 term by term.
  const double carrier_cycles = params.f0 / params.W - 0.5;
  for (std::size_t m = 1; m <= tones_; ++m) {
    for (std::size_t l = 0; l < taps_; ++l) {
      const double c1 = std::fmod(carrier_cycles * static_cast<double>(l), 1.0);
      const double c2 = static_cast<double>((m * l) % tones_) / static_cast<double>(tones_);
      const double phase = -2.0 * std::numbers::pi * (c1 + c2);
      table_[(m - 1) * taps_ + l] = std::polar(1.0, phase);
    }
  }
}

void ToneBasis::apply(std::span<const cplx> amps, std::span<cplx> out) const {
  if (amps.size() != taps_ || out.size() != tones_) {
    throw std::invalid_argument("ToneBasis::apply: dimension mismatch");
  }
  kernels::matvec(table_, tones_, amps, out);
}

CVector taps_to_frequency(const TapState& state, const ChannelParams& params) {
  if (state.amps.size() != state.profile.size()) {
    throw std::invalid_argument("taps_to_frequency: taps not initialized");
  }
  ToneBasis basis(params, state.taps());
  CVector out(params.M);
  basis.apply(state.amps, out);
  return out;
}

FreqResponse sample_response(std::span<const cplx> fixed, const TapState& state,
                             const ChannelParams& params, RngStream& rng) {
  if (fixed.size() != params.M) {
    throw std::invalid_argument("sample_response: fixed response length != M");
  }
  FreqResponse r;
  r.samples = taps_to_frequency(state, params);
  r.k = state.k;
  for (std::size_t m = 0; m < params.M; ++m) {
    r.samples[m] += fixed[m] + sample_complex_gaussian(rng, params.sigma_N2);
  }
  return r;
}

TapState eve_variation(const TapState& alice_state, SpatialMode mode, RngStream& rng,
                       const ChannelParams& /*params*/) {
  if (mode == SpatialMode::FullyCorrelatedVariation) return alice_state;
  TapState eve = init_taps(alice_state, rng);
  eve.k = alice_state.k;
  return eve;
}

ProbeSimulator::ProbeSimulator(const ChannelParams& params, CVector fixed_alice,
                               CVector fixed_eve, SpatialMode mode)
    : params_(params),
      fixed_alice_(std::move(fixed_alice)),
      fixed_eve_(std::move(fixed_eve)),
      mode_(mode),
      alice_(variation_profile(params)),
      eve_(alice_),
      basis_(params, alice_.taps()),
      eps_(params.M) {
  if (fixed_alice_.size() != params.M || fixed_eve_.size() != params.M) {
    throw std::invalid_argument("ProbeSimulator: fixed response length != M");
  }
}

void ProbeSimulator::compose(std::span<const cplx> fixed, std::span<const cplx> variation,
                             RngStream& rng, CVector& out) {
  out.resize(params_.M);
  for (std::size_t m = 0; m < params_.M; ++m) {
    out[m] = fixed[m] + variation[m] + sample_complex_gaussian(rng, params_.sigma_N2);
  }
}

void ProbeSimulator::next(RngStream& rng, ProbeTriple& out) {
  init_taps_inplace(alice_, rng);
  basis_.apply(alice_.amps, eps_);
  compose(fixed_alice_, eps_, rng, out.reference);

  step_taps_inplace(alice_, params_.a, rng);
  basis_.apply(alice_.amps, eps_);
  compose(fixed_alice_, eps_, rng, out.alice);

  if (mode_ == SpatialMode::IndependentVariation) {
    init_taps_inplace(eve_, rng);
    basis_.apply(eve_.amps, eps_);
  }
  compose(fixed_eve_, eps_, rng, out.eve);
}

}  // namespace physauth
