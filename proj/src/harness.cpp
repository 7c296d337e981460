#include "physauth/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "physauth/kernels.hpp"
#include "physauth/parallel.hpp"
#include "physauth/stats.hpp"

namespace physauth {

namespace {

constexpr std::size_t kChunk = 4096;

// Stream ids under the experiment seed.
constexpr std::uint64_t kPairStreams = 1;
constexpr std::uint64_t kSubsampleStream = 2;

constexpr std::array<std::pair<SweepAxis, std::string_view>, 6> kAxisNames{{
    {SweepAxis::bT, "b_T"},
    {SweepAxis::W, "W"},
    {SweepAxis::M, "M"},
    {SweepAxis::P_T, "P_T"},
    {SweepAxis::Bc, "B_c"},
    {SweepAxis::spatial_mode, "spatial_mode"},
}};

double binomial_se(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

struct Counts {
  std::size_t false_alarms = 0;
  std::size_t misses = 0;
};

// Runs `trials` rounds in fixed chunks; chunk c draws from rng.split(c).
template <class PerRound>
void for_each_round(const ChannelParams& params, std::span<const cplx> hbar_A,
                    std::span<const cplx> hbar_E, SpatialMode mode, std::size_t trials,
                    unsigned threads, const RngStream& rng, std::vector<Counts>& per_chunk,
                    PerRound per_round) {
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  per_chunk.assign(chunks, Counts{});
  parallel_for(chunks, threads, [&](std::size_t c) {
    ProbeSimulator sim(params, CVector(hbar_A.begin(), hbar_A.end()),
                       CVector(hbar_E.begin(), hbar_E.end()), mode);
    RngStream local = rng.split(c);
    ProbeTriple round;
    const std::size_t stop = std::min(trials, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < stop; ++t) {
      sim.next(local, round);
      per_round(round, per_chunk[c]);
    }
  });
}

double calibrated_unknown_threshold(std::span<const cplx> hbar_A, const ChannelParams& params,
                                    double alpha, SpatialMode mode, std::size_t trials,
                                    unsigned threads, const RngStream& rng) {
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> z(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    ProbeSimulator sim(params, CVector(hbar_A.begin(), hbar_A.end()),
                       CVector(hbar_A.begin(), hbar_A.end()), mode);
    RngStream local = rng.split(c);
    ProbeTriple round;
    const std::size_t stop = std::min(trials, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < stop; ++t) {
      sim.next(local, round);
      z[c].push_back(statistic_unknown(round.alice, round.reference, params.sigma_N2));
    }
  });
  std::vector<double> all;
  all.reserve(trials);
  for (const auto& v : z) all.insert(all.end(), v.begin(), v.end());
  return calibrate_unknown_threshold(all, alpha);
}

}  // namespace

void LinkBudget::validate() const {
  if (!(P_T > 0.0 && kT > 0.0 && N_F > 0.0 && b > 0.0)) {
    throw std::invalid_argument("LinkBudget: P_T, kT, N_F and b must all be > 0");
  }
}

double noise_variance(const LinkBudget& budget, std::size_t M) {
  budget.validate();
  return budget.kT * budget.N_F * budget.b / (budget.P_T / static_cast<double>(M));
}

double sigma_T_from_bT(double b_T, double room_gain) {
  if (!(b_T >= 0.0 && room_gain >= 0.0)) {
    throw std::invalid_argument("sigma_T_from_bT: b_T and room gain must be >= 0");
  }
  return b_T * room_gain;
}

MissRateEstimate pair_miss_rate(std::span<const cplx> hbar_A, std::span<const cplx> hbar_E,
                                const ChannelParams& params, const TestConfig& cfg,
                                const EvalOptions& opts, const RngStream& rng) {
  params.validate();
  auto closed = [](double beta) { return MissRateEstimate{beta, 0.0, 0}; };
  const bool correlated = opts.mode == SpatialMode::FullyCorrelatedVariation;

  switch (cfg.regime) {
    case Regime::TimeInvariantBenchmark:
      return closed(miss_rate_time_invariant(cfg.alpha, params.sigma_N2, hbar_A, hbar_E, params.M));
    case Regime::FullSpatialCorrelation:
      return closed(miss_rate_full_spatial(cfg.alpha, params, hbar_A, hbar_E, covariance_R(params)));
    case Regime::LowBcClosedForm:
      if (correlated) {
        return closed(miss_rate_full_spatial(cfg.alpha, params, hbar_A, hbar_E,
                                             asymptotic_R_low_bc(params)));
      }
      return closed(miss_rate_low_bc(cfg.alpha, params, hbar_A, hbar_E));
    case Regime::GeneralKnownParams:
      if (correlated) {
        return closed(miss_rate_full_spatial(cfg.alpha, params, hbar_A, hbar_E, covariance_R(params)));
      }
      // At Bc = 0 both covariances are exactly diagonal: the low-Bc form is exact.
      if (params.Bc == 0.0) return closed(miss_rate_low_bc(cfg.alpha, params, hbar_A, hbar_E));
      return miss_rate_general_numerical(cfg.alpha, params, hbar_A, hbar_E, covariance_R(params),
                                         covariance_G(params), opts.trials, rng);
    case Regime::HighBcNumerical: {
      const HermitianMatrix R = asymptotic_R_high_bc(params);
      if (correlated) return closed(miss_rate_full_spatial(cfg.alpha, params, hbar_A, hbar_E, R));
      return miss_rate_general_numerical(cfg.alpha, params, hbar_A, hbar_E, R,
                                         asymptotic_G_high_bc(params), opts.trials, rng);
    }
    case Regime::UnknownParams: {
      const ErrorRates er = empirical_error_rates(hbar_A, hbar_E, params, cfg, opts, rng);
      return {er.beta_hat, er.beta_std_err, er.trials};
    }
  }
  throw std::invalid_argument("pair_miss_rate: unknown regime");
}

MissRateEstimate pair_miss_rate(const RoomScene& scene, const Vec3& alice, const Vec3& eve,
                                const Vec3& bob, const ChannelParams& params,
                                const TestConfig& cfg, const EvalOptions& opts,
                                const RngStream& rng) {
  if (alice == bob || eve == bob) {
    throw std::invalid_argument("pair_miss_rate: transmitters must differ from bob");
  }
  const CVector ha = fixed_response(scene, alice, bob, params);
  const CVector he = fixed_response(scene, eve, bob, params);
  return pair_miss_rate(ha, he, params, cfg, opts, rng);
}

ErrorRates empirical_error_rates(std::span<const cplx> hbar_A, std::span<const cplx> hbar_E,
                                 const ChannelParams& params, const TestConfig& cfg,
                                 const EvalOptions& opts, const RngStream& rng) {
  params.validate();
  if (opts.trials == 0) throw std::invalid_argument("empirical_error_rates: trials must be >= 1");

  TestConfig effective = cfg;
  if (cfg.regime == Regime::UnknownParams && !cfg.threshold_override) {
    effective.threshold_override = calibrated_unknown_threshold(
        hbar_A, params, cfg.alpha, opts.mode, opts.trials, opts.threads, rng.split(~0ULL));
  }
  const Detector detector(effective, params);
  const double T = detector.threshold();

  std::vector<Counts> per_chunk;
  for_each_round(params, hbar_A, hbar_E, opts.mode, opts.trials, opts.threads, rng, per_chunk,
                 [&](const ProbeTriple& r, Counts& c) {
                   if (detector.statistic(r.alice, r.reference) > T) ++c.false_alarms;
                   if (detector.statistic(r.eve, r.reference) <= T) ++c.misses;
                 });
  Counts total;
  for (const auto& c : per_chunk) {
    total.false_alarms += c.false_alarms;
    total.misses += c.misses;
  }
  ErrorRates out;
  out.trials = opts.trials;
  out.threshold = T;
  const double n = static_cast<double>(opts.trials);
  out.alpha_hat = static_cast<double>(total.false_alarms) / n;
  out.beta_hat = static_cast<double>(total.misses) / n;
  out.alpha_std_err = binomial_se(out.alpha_hat, opts.trials);
  out.beta_std_err = binomial_se(out.beta_hat, opts.trials);
  return out;
}

ErrorRates empirical_error_rates(const RoomScene& scene, const Vec3& alice, const Vec3& eve,
                                 const Vec3& bob, const ChannelParams& params,
                                 const TestConfig& cfg, const EvalOptions& opts,
                                 const RngStream& rng) {
  const CVector ha = fixed_response(scene, alice, bob, params);
  const CVector he = alice == eve ? ha : fixed_response(scene, eve, bob, params);
  return empirical_error_rates(ha, he, params, cfg, opts, rng);
}

std::string_view axis_name(SweepAxis axis) {
  for (const auto& [a, name] : kAxisNames) {
    if (a == axis) return name;
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxisNames) {
    if (n == name) return a;
  }
  return std::nullopt;
}

void Experiment::validate() const {
  scene.validate();
  grid.validate();
  budget.validate();
  channel.validate();
  if (!(b_T >= 0.0)) throw std::invalid_argument("Experiment: b_T must be >= 0");
  if (trials == 0) throw std::invalid_argument("Experiment: trials must be >= 1");
  if (pair_budget == 0) throw std::invalid_argument("Experiment: pair_budget must be >= 1");
  if (grid.size() < 2) throw std::invalid_argument("Experiment: grid needs at least 2 points");
  if (!scene.contains(bob)) throw std::invalid_argument("Experiment: bob must be inside the room");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!scene.contains(grid.point(i))) {
      throw std::invalid_argument("Experiment: grid extends outside the room");
    }
    if (grid.point(i) == bob) throw std::invalid_argument("Experiment: bob sits on a grid point");
  }
}

ResolvedPoint resolve_point(const Experiment& exp, SweepAxis axis, double value) {
  ResolvedPoint rp;
  rp.params = exp.channel;
  rp.budget = exp.budget;
  rp.mode = exp.mode;
  double b_T = exp.b_T;
  switch (axis) {
    case SweepAxis::bT: b_T = value; break;
    case SweepAxis::W: rp.params.W = value; break;
    case SweepAxis::M:
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw std::invalid_argument("sweep: M values must be positive integers");
      }
      rp.params.M = static_cast<std::size_t>(value);
      break;
    case SweepAxis::P_T: rp.budget.P_T = value; break;
    case SweepAxis::Bc: rp.params.Bc = value; break;
    case SweepAxis::spatial_mode:
      rp.mode = value == 0.0 ? SpatialMode::IndependentVariation
                             : SpatialMode::FullyCorrelatedVariation;
      break;
  }
  if (!(b_T >= 0.0)) throw std::invalid_argument("sweep: b_T must be >= 0");
  rp.params.sigma_N2 = noise_variance(rp.budget, rp.params.M);
  rp.params.sigma_T = 0.0;
  rp.params.validate();

  rp.responses.reserve(exp.grid.size());
  for (std::size_t i = 0; i < exp.grid.size(); ++i) {
    rp.responses.push_back(fixed_response(exp.scene, exp.grid.point(i), exp.bob, rp.params));
  }
  rp.room_gain = room_average_gain(rp.responses);
  rp.params.sigma_T = sigma_T_from_bT(b_T, rp.room_gain);
  return rp;
}

std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t idx, std::size_t n) {
  // Row i holds pairs (i, i+1..n-1).
  std::uint64_t row_start = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::uint64_t row_len = n - 1 - i;
    if (idx < row_start + row_len) return {i, static_cast<std::size_t>(i + 1 + idx - row_start)};
    row_start += row_len;
  }
  throw std::out_of_range("pair_from_index: index beyond pair population");
}

std::vector<std::uint64_t> select_pairs(std::size_t grid_points, std::size_t pair_budget,
                                        std::uint64_t seed) {
  const std::uint64_t population =
      static_cast<std::uint64_t>(grid_points) * (grid_points - 1) / 2;
  if (population == 0) throw std::invalid_argument("select_pairs: grid has fewer than 2 points");
  std::vector<std::uint64_t> out;
  if (pair_budget >= population) {
    out.resize(population);
    for (std::uint64_t i = 0; i < population; ++i) out[i] = i;
    return out;
  }
  // Floyd's sampling without replacement.
  RngStream rng(seed, kSubsampleStream);
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = population - pair_budget; j < population; ++j) {
    const std::uint64_t t = rng.uniform_index(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

SweepResult room_sweep(const Experiment& exp, SweepAxis axis, std::span<const double> values) {
  exp.validate();
  if (values.empty()) throw std::invalid_argument("room_sweep: no sweep values");
  const auto pairs = select_pairs(exp.grid.size(), exp.pair_budget, exp.seed);
  const RngStream pair_root(exp.seed, kPairStreams);

  SweepResult result;
  result.axis = axis;
  for (double value : values) {
    const ResolvedPoint rp = resolve_point(exp, axis, value);
    // Pair-level parallelism; Monte Carlo inside a pair stays on one worker.
    EvalOptions opts{rp.mode, exp.trials, 1};
    std::vector<double> betas(pairs.size());
    parallel_for(pairs.size(), exp.threads, [&](std::size_t k) {
      const auto [i, j] = pair_from_index(pairs[k], exp.grid.size());
      betas[k] = pair_miss_rate(rp.responses[i], rp.responses[j], rp.params, exp.test, opts,
                                pair_root.split(pairs[k]))
                     .beta;
    });

    SweepPoint pt;
    pt.value = value;
    pt.pair_count = pairs.size();
    pt.sigma_T = rp.params.sigma_T;
    pt.sigma_N2 = rp.params.sigma_N2;
    pt.room_gain = rp.room_gain;
    double sum = 0.0;
    for (double b : betas) sum += b;
    pt.beta_bar = sum / static_cast<double>(betas.size());
    if (betas.size() > 1) {
      double ss = 0.0;
      for (double b : betas) ss += (b - pt.beta_bar) * (b - pt.beta_bar);
      const double n = static_cast<double>(betas.size());
      pt.std_err = std::sqrt(ss / (n - 1.0) / n);
    }
    result.points.push_back(pt);
  }
  return result;
}

bool separated(double lower, double lower_se, double upper, double upper_se) {
  return upper - lower >= 3.0 * std::hypot(lower_se, upper_se);
}

}  // namespace physauth
