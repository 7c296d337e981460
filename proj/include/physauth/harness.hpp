#pragma once

// Experimental protocol: Alice and Eve on a grid, Bob fixed, per-pair miss
// rates averaged over the room and swept over one parameter.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "physauth/channel.hpp"
#include "physauth/detect.hpp"
#include "physauth/raytrace.hpp"
#include "physauth/rng.hpp"

namespace physauth {

struct LinkBudget {
  double P_T = 10.0;                        ///< total transmit power, mW
  double kT = 3.981071705534973e-18;        ///< thermal noise density, mW/Hz (-174 dBm/Hz)
  double N_F = 10.0;                        ///< noise figure, linear
  double b = 0.25e6;                        ///< per-tone noise bandwidth, Hz

  void validate() const;
};

/// sigma_N^2 = kT N_F b / (P_T / M) = M / Gamma.
double noise_variance(const LinkBudget& budget, std::size_t M);

/// sigma_T = b_T * room gain.
double sigma_T_from_bT(double b_T, double room_gain);

/// Monte Carlo / evaluation knobs shared by the per-pair evaluators.
struct EvalOptions {
  SpatialMode mode = SpatialMode::IndependentVariation;
  std::size_t trials = 10000;  ///< Monte Carlo trials where no closed form applies
  unsigned threads = 1;
};

/// Miss rate for one Alice/Eve pair of fixed responses under cfg.regime:
/// closed form where the regime admits one, Monte Carlo otherwise
/// (std_err = 0 for closed forms).
MissRateEstimate pair_miss_rate(std::span<const cplx> hbar_A, std::span<const cplx> hbar_E,
                                const ChannelParams& params, const TestConfig& cfg,
                                const EvalOptions& opts, const RngStream& rng);

MissRateEstimate pair_miss_rate(const RoomScene& scene, const Vec3& alice, const Vec3& eve,
                                const Vec3& bob, const ChannelParams& params,
                                const TestConfig& cfg, const EvalOptions& opts,
                                const RngStream& rng);

struct ErrorRates {
  double alpha_hat = 0.0;
  double alpha_std_err = 0.0;
  double beta_hat = 0.0;
  double beta_std_err = 0.0;
  double threshold = 0.0;
  std::size_t trials = 0;
};

/// End-to-end error rates through the tap model: probe at k-1, test Alice and
/// Eve at k. UnknownParams without a threshold override calibrates one on a
/// separate H0 training window of the same size.
ErrorRates empirical_error_rates(std::span<const cplx> hbar_A, std::span<const cplx> hbar_E,
                                 const ChannelParams& params, const TestConfig& cfg,
                                 const EvalOptions& opts, const RngStream& rng);

ErrorRates empirical_error_rates(const RoomScene& scene, const Vec3& alice, const Vec3& eve,
                                 const Vec3& bob, const ChannelParams& params,
                                 const TestConfig& cfg, const EvalOptions& opts,
                                 const RngStream& rng);

enum class SweepAxis { bT, W, M, P_T, Bc, spatial_mode };

std::string_view axis_name(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view name);

/// Everything one room sweep needs. sigma_T and sigma_N2 in `channel` are
/// ignored: they are derived per sweep point from b_T and the link budget.
struct Experiment {
  RoomScene scene;
  GridSpec grid;
  Vec3 bob;
  LinkBudget budget;
  ChannelParams channel;
  double b_T = 0.5;
  SpatialMode mode = SpatialMode::IndependentVariation;
  TestConfig test;
  std::size_t trials = 10000;
  std::size_t pair_budget = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
};

struct SweepPoint {
  double value = 0.0;
  double beta_bar = 0.0;
  double std_err = 0.0;
  std::size_t pair_count = 0;
  double sigma_T = 0.0;
  double sigma_N2 = 0.0;
  double room_gain = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::bT;
  std::vector<SweepPoint> points;
};

/// Experiment with one axis set to `value`, sigma_N2 and sigma_T filled in.
struct ResolvedPoint {
  ChannelParams params;
  LinkBudget budget;
  SpatialMode mode;
  std::vector<CVector> responses;  ///< fixed response of every grid point to Bob
  double room_gain = 0.0;
};
ResolvedPoint resolve_point(const Experiment& exp, SweepAxis axis, double value);

/// Pair population indices: all N(N-1)/2 pairs when the budget covers them,
/// else a seeded uniform sample without replacement; ascending.
std::vector<std::uint64_t> select_pairs(std::size_t grid_points, std::size_t pair_budget,
                                        std::uint64_t seed);

/// (i, j), i < j, of population index idx in row-major upper-triangle order.
std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t idx, std::size_t grid_points);

SweepResult room_sweep(const Experiment& exp, SweepAxis axis, std::span<const double> values);

/// True when `upper` exceeds `lower` by at least three combined standard errors.
bool separated(double lower, double lower_se, double upper, double upper_se);

}  // namespace physauth
