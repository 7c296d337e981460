#pragma once

// Bob's hypothesis tests (H0: the claimant is Alice) and the miss-rate
// evaluators for each channel regime.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "physauth/channel.hpp"
#include "physauth/numerics.hpp"
#include "physauth/rng.hpp"

namespace physauth {

enum class Regime {
  GeneralKnownParams,
  LowBcClosedForm,
  HighBcNumerical,
  UnknownParams,
  FullSpatialCorrelation,
  TimeInvariantBenchmark,
};

std::string_view regime_name(Regime r);
std::optional<Regime> parse_regime(std::string_view name);

struct TestConfig {
  double alpha = 0.01;
  Regime regime = Regime::GeneralKnownParams;
  std::optional<double> threshold_override;

  void validate() const;
};

enum class Decision { AcceptH0, RejectH0 };

struct TestOutcome {
  double Z = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::AcceptH0;
};

/// Z = 2 d^H R^{-1} d, d = h_now - h_ref, via whitening against R's factor.
double statistic_general(std::span<const cplx> h_now, std::span<const cplx> h_ref,
                         const HermitianMatrix& R);

/// Z = |h_now - h_ref|^2 / sigma_N2, for when a, Bc, sigma_T are unknown.
double statistic_unknown(std::span<const cplx> h_now, std::span<const cplx> h_ref,
                         double sigma_N2);

/// Threshold for `cfg` with M tones: the override if set, else the
/// (1 - alpha) quantile of chi-square with 2M dof. UnknownParams requires an
/// override.
double test_threshold(const TestConfig& cfg, std::size_t M);

/// Reject H0 iff Z > threshold; equality accepts.
TestOutcome decide(double Z, const TestConfig& cfg, std::size_t M);

/// Low coherence-bandwidth closed form:
///   beta = F_{chi2(2M, mu)}(rho * F^{-1}_{chi2(2M)}(1 - alpha))
///   rho = ((1-a) sT^2 + sN^2) / (sT^2 + sN^2),  mu = |Hbar_E - Hbar_A|^2 / (sT^2 + sN^2)
double miss_rate_low_bc(double alpha, const ChannelParams& params,
                        std::span<const cplx> hbar_A, std::span<const cplx> hbar_E);

struct MissRateEstimate {
  double beta = 0.0;
  double std_err = 0.0;  ///< binomial, sqrt(beta (1 - beta) / trials)
  std::size_t trials = 0;
};

/// Monte Carlo beta = Pr{Z <= T | H1}: draws d ~ CN(Hbar_E - Hbar_A, G) and
/// tests it with R. Trials run in chunks, each on rng.split(chunk), so the
/// estimate depends only on (rng, trials).
MissRateEstimate miss_rate_general_numerical(double alpha, const ChannelParams& params,
                                             std::span<const cplx> hbar_A,
                                             std::span<const cplx> hbar_E,
                                             const HermitianMatrix& R, const HermitianMatrix& G,
                                             std::size_t trials, const RngStream& rng);

/// Fully correlated variation: the common variable part cancels, so under H1
/// Z ~ chi2(2M, mu) with mu = 2 (Hbar_E - Hbar_A)^H R^{-1} (Hbar_E - Hbar_A).
double miss_rate_full_spatial(double alpha, const ChannelParams& params,
                              std::span<const cplx> hbar_A, std::span<const cplx> hbar_E,
                              const HermitianMatrix& R);

/// Time-invariant benchmark, mu = |Hbar_E - Hbar_A|^2 / sigma_N2.
double miss_rate_time_invariant(double alpha, double sigma_N2, std::span<const cplx> hbar_A,
                                std::span<const cplx> hbar_E, std::size_t M);

/// Variation-dominated limit F_{chi2(2M)}((1-a) F^{-1}_{chi2(2M)}(1 - alpha)).
double miss_rate_large_variation(double alpha, double a, std::size_t M);

struct RocPoint {
  double threshold = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
};

/// Empirical (alpha, beta) of the unknown-parameter statistic for each
/// threshold. Both hypotheses share one set of simulated rounds, so
/// alpha_hat is nonincreasing and beta_hat nondecreasing in the threshold.
std::vector<RocPoint> roc_unknown_params(const ChannelParams& params,
                                         std::span<const cplx> hbar_A,
                                         std::span<const cplx> hbar_E,
                                         std::span<const double> thresholds, std::size_t trials,
                                         const RngStream& rng,
                                         SpatialMode mode = SpatialMode::IndependentVariation);

/// Threshold for the unknown-parameter test from an H0 training window: the
/// smallest sample T with at most a fraction alpha of the window above it.
double calibrate_unknown_threshold(std::span<const double> h0_statistics, double alpha);

/// Bob's test for one regime: the statistic, its covariance and threshold.
class Detector {
 public:
  Detector(const TestConfig& cfg, const ChannelParams& params);

  const TestConfig& config() const { return cfg_; }
  /// Throws std::logic_error for UnknownParams without a threshold override.
  double threshold() const;
  /// Covariance the statistic whitens against; nullptr for UnknownParams.
  const HermitianMatrix* covariance() const { return R_ ? &*R_ : nullptr; }

  double statistic(std::span<const cplx> h_now, std::span<const cplx> h_ref) const;
  TestOutcome test(std::span<const cplx> h_now, std::span<const cplx> h_ref) const;

 private:
  TestConfig cfg_;
  double sigma_N2_;
  std::optional<HermitianMatrix> R_;
  std::optional<double> threshold_;
};

/// Covariance Bob's statistic assumes under each regime (no UnknownParams).
HermitianMatrix regime_covariance_R(Regime regime, const ChannelParams& params);

}  // namespace physauth
