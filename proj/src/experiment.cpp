#include "physauth/experiment.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace physauth {

namespace {

constexpr std::array kAllRegimes{
    Regime::GeneralKnownParams,     Regime::LowBcClosedForm,        Regime::HighBcNumerical,
    Regime::UnknownParams,          Regime::FullSpatialCorrelation, Regime::TimeInvariantBenchmark,
};

// Stream id for the calibration runs, disjoint from the sweep streams.
constexpr std::uint64_t kCalibrationStream = 3;

std::string sweep_value_text(SweepAxis axis, double v) {
  if (axis == SweepAxis::spatial_mode) {
    return std::string(spatial_mode_name(v == 0.0 ? SpatialMode::IndependentVariation
                                                  : SpatialMode::FullyCorrelatedVariation));
  }
  return format_number(v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses; prints diagnostics and returns nullopt on failure.
std::optional<ExperimentConfig> parse_or_report(const std::filesystem::path& path,
                                                const std::string& text, std::ostream& err) {
  ConfigParse parsed = parse_config(text);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) err << format_diagnostic(path, d) << '\n';
    return std::nullopt;
  }
  return std::move(parsed.config);
}

std::string summary_text(const std::filesystem::path& config_path, const std::string& text,
                         const ExperimentConfig& cfg, const SweepResult& result,
                         const std::vector<CalibrationRow>& calib) {
  const Experiment& e = cfg.experiment;
  std::ostringstream s;
  s << "config: " << config_path.filename().string() << '\n';
  s << "config_hash: " << config_hash(text) << '\n';
  s << "seed: " << e.seed << '\n';
  s << "threads: " << e.threads << '\n';
  s << "geometry: synthetic (image-source room model, not measured data)\n";
  s << "\n[config]\n";
  for (const auto& [key, value] : cfg.entries) s << key << " = " << value << '\n';

  s << "\n[sweep]\n";
  s << "axis: " << axis_name(result.axis) << '\n';
  s << "regime: " << regime_name(e.test.regime) << '\n';
  s << "alpha: " << format_number(e.test.alpha) << '\n';
  s << "pairs: " << (result.points.empty() ? 0 : result.points.front().pair_count) << '\n';
  for (const auto& p : result.points) {
    s << axis_name(result.axis) << "=" << sweep_value_text(result.axis, p.value)
      << "  beta_bar=" << format_number(p.beta_bar) << "  std_err=" << format_number(p.std_err)
      << "  sigma_T=" << format_number(p.sigma_T) << "  sigma_N2=" << format_number(p.sigma_N2)
      << '\n';
  }
  const auto best = std::min_element(result.points.begin(), result.points.end(),
                                     [](const auto& a, const auto& b) {
                                       return a.beta_bar < b.beta_bar;
                                     });
  if (best != result.points.end()) {
    s << "lowest beta_bar: " << format_number(best->beta_bar) << " at "
      << axis_name(result.axis) << "=" << sweep_value_text(result.axis, best->value) << '\n';
  }

  s << "\n[calibration]\n";
  for (const auto& row : calib) {
    s << regime_name(row.regime) << ": alpha_hat=" << format_number(row.alpha_hat)
      << "  std_err=" << format_number(row.std_err) << '\n';
  }
  return s.str();
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_number: to_chars failed");
  return std::string(buf.data(), ptr);
}

std::string config_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

std::vector<CalibrationRow> calibrate_regimes(const ExperimentConfig& cfg) {
  const Experiment& e = cfg.experiment;
  const ResolvedPoint rp = resolve_point(e, cfg.axis, cfg.values.front());
  const CVector& h = rp.responses.front();
  const RngStream root(e.seed, kCalibrationStream);
  std::vector<CalibrationRow> rows;
  for (std::size_t r = 0; r < kAllRegimes.size(); ++r) {
    TestConfig tc = e.test;
    tc.regime = kAllRegimes[r];
    if (tc.regime != e.test.regime) tc.threshold_override.reset();
    const EvalOptions opts{rp.mode, e.trials, e.threads};
    const ErrorRates er = empirical_error_rates(h, h, rp.params, tc, opts, root.split(r));
    rows.push_back({tc.regime, er.alpha_hat, er.alpha_std_err, er.threshold, er.trials});
  }
  return rows;
}

std::string sweep_csv(const ExperimentConfig& cfg, const SweepResult& result) {
  std::string out = "sweep_param,value,beta_bar,std_err,pair_count,alpha,regime\n";
  const std::string alpha = format_number(cfg.experiment.test.alpha);
  const std::string regime(regime_name(cfg.experiment.test.regime));
  const std::string axis(axis_name(result.axis));
  for (const auto& p : result.points) {
    out += axis + ',' + sweep_value_text(result.axis, p.value) + ',' + format_number(p.beta_bar) +
           ',' + format_number(p.std_err) + ',' + std::to_string(p.pair_count) + ',' + alpha +
           ',' + regime + '\n';
  }
  return out;
}

std::string calibration_csv(const ExperimentConfig& cfg, const std::vector<CalibrationRow>& rows) {
  std::string out = "regime,alpha,alpha_hat,std_err,threshold,trials\n";
  const std::string alpha = format_number(cfg.experiment.test.alpha);
  for (const auto& r : rows) {
    out += std::string(regime_name(r.regime)) + ',' + alpha + ',' + format_number(r.alpha_hat) +
           ',' + format_number(r.std_err) + ',' + format_number(r.threshold) + ',' +
           std::to_string(r.trials) + '\n';
  }
  return out;
}

int validate_command(const std::filesystem::path& config_path, std::ostream& err) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitInvalidConfig;
  }
  return parse_or_report(config_path, text, err) ? kExitOk : kExitInvalidConfig;
}

int run_command(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                const RunOverrides& overrides, std::ostream& log, std::ostream& err) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitInvalidConfig;
  }
  auto cfg = parse_or_report(config_path, text, err);
  if (!cfg) return kExitInvalidConfig;
  if (overrides.seed) cfg->experiment.seed = *overrides.seed;
  if (overrides.threads) {
    if (*overrides.threads == 0) {
      err << "error: --threads must be >= 1\n";
      return kExitInvalidConfig;
    }
    cfg->experiment.threads = *overrides.threads;
  }

  const std::array<std::filesystem::path, 3> outputs{
      out_dir / "sweep.csv", out_dir / "calibration.csv", out_dir / "summary.txt"};
  try {
    std::filesystem::create_directories(out_dir);
    log << "sweeping " << axis_name(cfg->axis) << " over " << cfg->values.size() << " values\n";
    const SweepResult result = room_sweep(cfg->experiment, cfg->axis, cfg->values);
    write_file(outputs[0], sweep_csv(*cfg, result));
    log << "calibrating false-alarm rates\n";
    const auto calib = calibrate_regimes(*cfg);
    write_file(outputs[1], calibration_csv(*cfg, calib));
    write_file(outputs[2], summary_text(config_path, text, *cfg, result, calib));
    log << "wrote " << out_dir.string() << '\n';
  } catch (const std::exception& ex) {
    std::error_code ec;
    for (const auto& p : outputs) std::filesystem::remove(p, ec);
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace physauth
