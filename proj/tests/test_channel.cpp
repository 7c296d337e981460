#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "physauth/channel.hpp"

using namespace physauth;

namespace {

ChannelParams base() {
  ChannelParams p;
  p.W = 10e6;
  p.M = 8;
  p.a = 0.9;
  p.Bc = 2e6;
  p.sigma_T = 0.7;
  p.sigma_N2 = 0.05;
  return p;
}

// Tone-domain covariance sum_l P_l exp(-j 2 pi (f_m - f_n) l / W) of a profile.
std::vector<cplx> tone_cov(const std::vector<double>& P, const ChannelParams& p) {
  std::vector<cplx> c(p.M * p.M, 0.0);
  for (std::size_t m = 1; m <= p.M; ++m) {
    for (std::size_t n = 1; n <= p.M; ++n) {
      for (std::size_t l = 0; l < P.size(); ++l) {
        const double df = p.tone_frequency(m) - p.tone_frequency(n);
        c[(m - 1) * p.M + n - 1] += P[l] * std::polar(1.0, -2 * std::numbers::pi * df * l / p.W);
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("parameter helpers and validation") {
  ChannelParams p = base();
  CHECK(p.delta_f() == doctest::Approx(1.25e6));
  CHECK(p.tone_frequency(1) == doctest::Approx(5e9 - 5e6 + 1.25e6));
  CHECK(p.tone_frequency(p.M) == doctest::Approx(5e9 + 5e6));
  CHECK(p.tap_decay() == doctest::Approx(std::exp(-2 * std::numbers::pi * 0.2)));
  p.Bc = 0.0;
  CHECK(p.tap_decay() == 1.0);
  p.Bc = kInfiniteBc;
  CHECK(p.tap_decay() == 0.0);

  for (auto mutate : std::vector<void (*)(ChannelParams&)>{
           [](ChannelParams& q) { q.M = 0; },
           [](ChannelParams& q) { q.W = 0; },
           [](ChannelParams& q) { q.a = 1.5; },
           [](ChannelParams& q) { q.a = -0.1; },
           [](ChannelParams& q) { q.Bc = -1; },
           [](ChannelParams& q) { q.sigma_N2 = -1; },
           [](ChannelParams& q) { q.sigma_T = -1; }}) {
    ChannelParams q = base();
    mutate(q);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  }
}

TEST_CASE("delay profile sums to sigma_T^2 and truncates its tail") {
  const ChannelParams p = base();
  const TapState s = build_delay_profile(p);
  const double total = std::accumulate(s.profile.begin(), s.profile.end(), 0.0);
  const double sT2 = p.sigma_T * p.sigma_T;
  CHECK(total <= sT2);
  CHECK(sT2 - total <= 1e-6 * sT2);
  const double q = p.tap_decay();
  for (std::size_t l = 0; l < s.taps(); ++l) {
    CHECK(s.profile[l] == doctest::Approx(sT2 * (1 - q) * std::pow(q, l)).epsilon(1e-12));
  }

  ChannelParams flat = p;
  flat.Bc = kInfiniteBc;
  CHECK(build_delay_profile(flat).profile == std::vector<double>{sT2});
  ChannelParams zero = p;
  zero.Bc = 0.0;
  CHECK_THROWS(build_delay_profile(zero));
}

TEST_CASE("folding preserves the tone-domain covariance") {
  ChannelParams p = base();
  p.Bc = 0.3e6;  // long profile, many folds
  const TapState full = build_delay_profile(p);
  REQUIRE(full.taps() > p.M);
  const TapState folded = fold_profile(full, p.M);
  CHECK(folded.taps() == p.M);
  const auto a = tone_cov(full.profile, p);
  const auto b = tone_cov(folded.profile, p);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);

  // Exact fold of the infinite profile.
  const TapState v = variation_profile(p);
  const double q = p.tap_decay();
  const double sT2 = p.sigma_T * p.sigma_T;
  for (std::size_t r = 0; r < p.M; ++r) {
    CHECK(v.profile[r] ==
          doctest::Approx(sT2 * (1 - q) * std::pow(q, r) / (1 - std::pow(q, p.M))).epsilon(1e-12));
  }

  p.Bc = 0.0;
  const TapState flat = variation_profile(p);
  CHECK(flat.taps() == p.M);
  for (double x : flat.profile) CHECK(x == doctest::Approx(sT2 / p.M));
  const auto c = tone_cov(flat.profile, p);
  for (std::size_t m = 0; m < p.M; ++m) {
    for (std::size_t n = 0; n < p.M; ++n) {
      CHECK(std::abs(c[m * p.M + n] - (m == n ? cplx{sT2} : cplx{})) < 1e-12);
    }
  }
}

TEST_CASE("tone basis matches the direct phasor sum") {
  const ChannelParams p = base();
  TapState s = variation_profile(p);
  RngStream rng(3, 3);
  init_taps_inplace(s, rng);
  const CVector eps = taps_to_frequency(s, p);
  for (std::size_t m = 1; m <= p.M; ++m) {
    cplx want = 0.0;
    for (std::size_t l = 0; l < s.taps(); ++l) {
      want += s.amps[l] * std::polar(1.0, -2 * std::numbers::pi * p.tone_frequency(m) * l / p.W);
    }
    CHECK(std::abs(eps[m - 1] - want) < 1e-9);
  }
}

TEST_CASE("AR-1 taps keep their stationary variance and lag-one correlation") {
  ChannelParams p = base();
  p.Bc = kInfiniteBc;
  TapState s = variation_profile(p);
  RngStream rng(8, 1);
  const int n = 100000;
  double v0 = 0.0, v1 = 0.0;
  cplx c01 = 0.0;
  for (int t = 0; t < n; ++t) {
    init_taps_inplace(s, rng);
    const cplx x0 = s.amps[0];
    step_taps_inplace(s, p.a, rng);
    const cplx x1 = s.amps[0];
    v0 += std::norm(x0);
    v1 += std::norm(x1);
    c01 += x1 * std::conj(x0);
  }
  const double sT2 = p.sigma_T * p.sigma_T;
  CHECK(v0 / n == doctest::Approx(sT2).epsilon(0.02));
  CHECK(v1 / n == doctest::Approx(sT2).epsilon(0.02));
  CHECK(c01.real() / n == doctest::Approx(p.a * sT2).epsilon(0.02));
  CHECK(s.k == 1);
}

TEST_CASE("sample response adds fixed part, variation and noise") {
  ChannelParams p = base();
  p.sigma_T = 0.0;
  p.sigma_N2 = 0.0;
  TapState s = variation_profile(p);
  RngStream rng(1, 1);
  const CVector fixed{1.0, cplx{0, 2}, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  CHECK(sample_response(fixed, s, p, rng).samples == fixed);
  CHECK_THROWS(sample_response(CVector(3), s, p, rng));
}

TEST_CASE("probe simulator spatial modes") {
  ChannelParams p = base();
  p.sigma_N2 = 0.0;
  const CVector ha(p.M, 1.0), he(p.M, cplx{0, 1});
  RngStream rng(4, 4);
  ProbeTriple t;

  ProbeSimulator fc(p, ha, he, SpatialMode::FullyCorrelatedVariation);
  fc.next(rng, t);
  for (std::size_t m = 0; m < p.M; ++m) {
    CHECK(std::abs((t.eve[m] - he[m]) - (t.alice[m] - ha[m])) < 1e-12);
  }

  ProbeSimulator ind(p, ha, he, SpatialMode::IndependentVariation);
  ind.next(rng, t);
  double diff = 0.0;
  for (std::size_t m = 0; m < p.M; ++m) diff += std::abs((t.eve[m] - he[m]) - (t.alice[m] - ha[m]));
  CHECK(diff > 1e-6);

  RngStream r1(9, 9), r2(9, 9);
  ProbeTriple a, b;
  ProbeSimulator s1(p, ha, he, SpatialMode::IndependentVariation);
  ProbeSimulator s2(p, ha, he, SpatialMode::IndependentVariation);
  s1.next(r1, a);
  s2.next(r2, b);
  CHECK(a.reference == b.reference);
  CHECK(a.eve == b.eve);
}
