#pragma once

// Experiment configuration: an INI-style text file.
//
//   # comment
//   [section]
//   key = value
//
// Sections and keys are fixed (see README); unknown ones are rejected.
// Every diagnostic carries the line it refers to (0 = whole file).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "physauth/harness.hpp"

namespace physauth {

struct Diagnostic {
  int line = 0;
  std::string message;
};

std::string format_diagnostic(const std::filesystem::path& path, const Diagnostic& d);

struct ExperimentConfig {
  Experiment experiment;
  SweepAxis axis = SweepAxis::bT;
  std::vector<double> values;
  /// (section.key, raw value) for every key in file order, for the summary echo.
  std::vector<std::pair<std::string, std::string>> entries;
};

struct ConfigParse {
  ExperimentConfig config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

ConfigParse parse_config(const std::string& text);

/// Reads and parses a config file. Throws std::runtime_error if unreadable.
ConfigParse load_config(const std::filesystem::path& path);

/// Text of a spatial_mode sweep value (0 independent, 1 fully correlated).
std::string_view spatial_mode_name(SpatialMode mode);

}  // namespace physauth
