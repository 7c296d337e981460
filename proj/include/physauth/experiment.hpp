#pragma once

// Config file -> output directory (sweep.csv, calibration.csv, summary.txt).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "physauth/config.hpp"

namespace physauth {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvalidConfig = 2, kExitRuntime = 3 };

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

/// Shortest round-trip decimal, locale independent ("inf" for infinity).
std::string format_number(double v);

/// 64-bit FNV-1a of the config bytes, as 16 hex digits.
std::string config_hash(std::string_view bytes);

/// Parses and checks `config_path`; diagnostics go to `err`.
int validate_command(const std::filesystem::path& config_path, std::ostream& err);

/// Runs the sweep and writes the three output files. On a runtime failure the
/// files written so far are removed.
int run_command(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                const RunOverrides& overrides, std::ostream& log, std::ostream& err);

struct CalibrationRow {
  Regime regime;
  double alpha_hat = 0.0;
  double std_err = 0.0;
  double threshold = 0.0;
  std::size_t trials = 0;
};

/// Empirical false-alarm rate of every regime's test on one grid point at
/// the first sweep value.
std::vector<CalibrationRow> calibrate_regimes(const ExperimentConfig& cfg);

std::string sweep_csv(const ExperimentConfig& cfg, const SweepResult& result);
std::string calibration_csv(const ExperimentConfig& cfg, const std::vector<CalibrationRow>& rows);

}  // namespace physauth
