#include "physauth/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "physauth/kernels.hpp"
#include "physauth/stats.hpp"

namespace physauth {

namespace {

constexpr std::size_t kChunk = 4096;

constexpr std::array<std::pair<Regime, std::string_view>, 6> kRegimeNames{{
    {Regime::GeneralKnownParams, "general"},
    {Regime::LowBcClosedForm, "low_bc"},
    {Regime::HighBcNumerical, "high_bc"},
    {Regime::UnknownParams, "unknown"},
    {Regime::FullSpatialCorrelation, "full_spatial"},
    {Regime::TimeInvariantBenchmark, "time_invariant"},
}};

void check_lengths(std::span<const cplx> a, std::span<const cplx> b, std::size_t M) {
  if (a.size() != M || b.size() != M) {
    throw std::invalid_argument("response length does not match tone count");
  }
}

double separation_power(std::span<const cplx> hbar_A, std::span<const cplx> hbar_E) {
  CVector diff(hbar_A.size());
  kernels::sub(hbar_E, hbar_A, diff);
  return kernels::norm2(diff);
}

unsigned dof(std::size_t M) { return static_cast<unsigned>(2 * M); }

}  // namespace

std::string_view regime_name(Regime r) {
  for (const auto& [reg, name] : kRegimeNames) {
    if (reg == r) return name;
  }
  return "?";
}

std::optional<Regime> parse_regime(std::string_view name) {
  for (const auto& [reg, n] : kRegimeNames) {
    if (n == name) return reg;
  }
  return std::nullopt;
}

void TestConfig::validate() const {
  if (threshold_override) {
    if (!(*threshold_override >= 0.0)) {
      throw std::invalid_argument("TestConfig: threshold_override must be >= 0");
    }
    return;
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("TestConfig: alpha must satisfy 0 < alpha < 1");
  }
  if (regime == Regime::UnknownParams) {
    throw std::invalid_argument("TestConfig: unknown-parameter regime needs a threshold");
  }
}

double statistic_general(std::span<const cplx> h_now, std::span<const cplx> h_ref,
                         const HermitianMatrix& R) {
  check_lengths(h_now, h_ref, R.dim());
  CVector d(R.dim());
  kernels::sub(h_now, h_ref, d);
  return 2.0 * R.inv_quad_form(d);
}

double statistic_unknown(std::span<const cplx> h_now, std::span<const cplx> h_ref,
                         double sigma_N2) {
  if (!(sigma_N2 > 0.0)) throw std::invalid_argument("statistic_unknown: sigma_N2 must be > 0");
  check_lengths(h_now, h_ref, h_now.size());
  CVector d(h_now.size());
  kernels::sub(h_now, h_ref, d);
  return kernels::norm2(d) / sigma_N2;
}

double test_threshold(const TestConfig& cfg, std::size_t M) {
  cfg.validate();
  if (cfg.threshold_override) return *cfg.threshold_override;
  return chi2_inv(1.0 - cfg.alpha, dof(M));
}

TestOutcome decide(double Z, const TestConfig& cfg, std::size_t M) {
  TestOutcome out;
  out.Z = Z;
  out.threshold = test_threshold(cfg, M);
  out.decision = Z > out.threshold ? Decision::RejectH0 : Decision::AcceptH0;
  return out;
}

double miss_rate_low_bc(double alpha, const ChannelParams& params,
                        std::span<const cplx> hbar_A, std::span<const cplx> hbar_E) {
  params.validate();
  check_lengths(hbar_A, hbar_E, params.M);
  const double var_T = params.sigma_T * params.sigma_T;
  const double total = var_T + params.sigma_N2;
  if (!(total > 0.0)) throw std::invalid_argument("miss_rate_low_bc: zero total variance");
  const double rho = ((1.0 - params.a) * var_T + params.sigma_N2) / total;
  const double mu = separation_power(hbar_A, hbar_E) / total;
  const double T = chi2_inv(1.0 - alpha, dof(params.M));
  return noncentral_chi2_cdf(rho * T, dof(params.M), mu);
}

MissRateEstimate miss_rate_general_numerical(double alpha, const ChannelParams& params,
                                             std::span<const cplx> hbar_A,
                                             std::span<const cplx> hbar_E,
                                             const HermitianMatrix& R, const HermitianMatrix& G,
                                             std::size_t trials, const RngStream& rng) {
  const std::size_t M = params.M;
  check_lengths(hbar_A, hbar_E, M);
  if (trials == 0) throw std::invalid_argument("miss_rate_general_numerical: trials must be >= 1");
  if (R.dim() != M || G.dim() != M) {
    throw std::invalid_argument("miss_rate_general_numerical: covariance dimension != M");
  }
  if (!G.factored()) {
    throw std::invalid_argument("miss_rate_general_numerical: G must be positive definite");
  }
  const double T = chi2_inv(1.0 - alpha, dof(M));
  CVector mean(M);
  kernels::sub(hbar_E, hbar_A, mean);

  CVector u(M), d(M), y(M);
  std::size_t accepted = 0;
  for (std::size_t start = 0, chunk = 0; start < trials; start += kChunk, ++chunk) {
    RngStream local = rng.split(chunk);
    const std::size_t stop = std::min(trials, start + kChunk);
    for (std::size_t t = start; t < stop; ++t) {
      for (auto& v : u) v = sample_complex_gaussian(local, 1.0);
      G.color(u, d);
      for (std::size_t m = 0; m < M; ++m) d[m] += mean[m];
      R.whiten(d, y);
      if (2.0 * kernels::norm2(y) <= T) ++accepted;
    }
  }
  MissRateEstimate est;
  est.trials = trials;
  est.beta = static_cast<double>(accepted) / static_cast<double>(trials);
  est.std_err = std::sqrt(est.beta * (1.0 - est.beta) / static_cast<double>(trials));
  return est;
}

double miss_rate_full_spatial(double alpha, const ChannelParams& params,
                              std::span<const cplx> hbar_A, std::span<const cplx> hbar_E,
                              const HermitianMatrix& R) {
  check_lengths(hbar_A, hbar_E, params.M);
  CVector diff(params.M);
  kernels::sub(hbar_E, hbar_A, diff);
  const double mu = 2.0 * R.inv_quad_form(diff);
  const double T = chi2_inv(1.0 - alpha, dof(params.M));
  return noncentral_chi2_cdf(T, dof(params.M), mu);
}

double miss_rate_time_invariant(double alpha, double sigma_N2, std::span<const cplx> hbar_A,
                                std::span<const cplx> hbar_E, std::size_t M) {
  if (!(sigma_N2 > 0.0)) {
    throw std::invalid_argument("miss_rate_time_invariant: sigma_N2 must be > 0");
  }
  check_lengths(hbar_A, hbar_E, M);
  const double mu = separation_power(hbar_A, hbar_E) / sigma_N2;
  return noncentral_chi2_cdf(chi2_inv(1.0 - alpha, dof(M)), dof(M), mu);
}

double miss_rate_large_variation(double alpha, double a, std::size_t M) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("miss_rate_large_variation: a");
  return chi2_cdf((1.0 - a) * chi2_inv(1.0 - alpha, dof(M)), dof(M));
}

std::vector<RocPoint> roc_unknown_params(const ChannelParams& params,
                                         std::span<const cplx> hbar_A,
                                         std::span<const cplx> hbar_E,
                                         std::span<const double> thresholds, std::size_t trials,
                                         const RngStream& rng, SpatialMode mode) {
  if (thresholds.empty()) throw std::invalid_argument("roc_unknown_params: no thresholds");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("roc_unknown_params: thresholds must be ascending");
  }
  if (trials == 0) throw std::invalid_argument("roc_unknown_params: trials must be >= 1");

  ProbeSimulator sim(params, CVector(hbar_A.begin(), hbar_A.end()),
                     CVector(hbar_E.begin(), hbar_E.end()), mode);
  std::vector<double> z0, z1;
  z0.reserve(trials);
  z1.reserve(trials);
  ProbeTriple round;
  for (std::size_t start = 0, chunk = 0; start < trials; start += kChunk, ++chunk) {
    RngStream local = rng.split(chunk);
    const std::size_t stop = std::min(trials, start + kChunk);
    for (std::size_t t = start; t < stop; ++t) {
      sim.next(local, round);
      z0.push_back(statistic_unknown(round.alice, round.reference, params.sigma_N2));
      z1.push_back(statistic_unknown(round.eve, round.reference, params.sigma_N2));
    }
  }
  std::sort(z0.begin(), z0.end());
  std::sort(z1.begin(), z1.end());

  const double n = static_cast<double>(trials);
  std::vector<RocPoint> out;
  out.reserve(thresholds.size());
  for (double T : thresholds) {
    // false alarm: Z0 > T; miss: Z1 <= T
    const auto above = z0.end() - std::upper_bound(z0.begin(), z0.end(), T);
    const auto at_or_below = std::upper_bound(z1.begin(), z1.end(), T) - z1.begin();
    out.push_back({T, static_cast<double>(above) / n, static_cast<double>(at_or_below) / n});
  }
  return out;
}

double calibrate_unknown_threshold(std::span<const double> h0_statistics, double alpha) {
  if (h0_statistics.empty()) throw std::invalid_argument("calibrate_unknown_threshold: empty");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("calibrate_unknown_threshold: alpha must be in (0, 1)");
  }
  std::vector<double> z(h0_statistics.begin(), h0_statistics.end());
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  auto idx = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n));
  idx = std::clamp<std::size_t>(idx, 1, z.size());
  return z[idx - 1];
}

HermitianMatrix regime_covariance_R(Regime regime, const ChannelParams& params) {
  switch (regime) {
    case Regime::GeneralKnownParams:
    case Regime::FullSpatialCorrelation:
      return covariance_R(params);
    case Regime::LowBcClosedForm:
      return asymptotic_R_low_bc(params);
    case Regime::HighBcNumerical:
      return asymptotic_R_high_bc(params);
    case Regime::TimeInvariantBenchmark:
      return cholesky(HermitianMatrix::identity(params.M, 2.0 * params.sigma_N2));
    case Regime::UnknownParams:
      break;
  }
  throw std::invalid_argument("regime_covariance_R: unknown-parameter test has no covariance");
}

Detector::Detector(const TestConfig& cfg, const ChannelParams& params)
    : cfg_(cfg), sigma_N2_(params.sigma_N2) {
  params.validate();
  if (cfg.regime == Regime::UnknownParams) {
    if (!(sigma_N2_ > 0.0)) throw std::invalid_argument("Detector: unknown regime needs sigma_N2 > 0");
    if (cfg.threshold_override) threshold_ = test_threshold(cfg, params.M);
  } else {
    R_ = regime_covariance_R(cfg.regime, params);
    threshold_ = test_threshold(cfg, params.M);
  }
}

double Detector::threshold() const {
  if (!threshold_) throw std::logic_error("Detector: no threshold for the unknown-parameter test");
  return *threshold_;
}

double Detector::statistic(std::span<const cplx> h_now, std::span<const cplx> h_ref) const {
  if (R_) return statistic_general(h_now, h_ref, *R_);
  return statistic_unknown(h_now, h_ref, sigma_N2_);
}

TestOutcome Detector::test(std::span<const cplx> h_now, std::span<const cplx> h_ref) const {
  TestOutcome out;
  out.Z = statistic(h_now, h_ref);
  out.threshold = threshold();
  out.decision = out.Z > out.threshold ? Decision::RejectH0 : Decision::AcceptH0;
  return out;
}

}  // namespace physauth
