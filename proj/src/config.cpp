#include "physauth/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace physauth {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct KeySpec {
  const char* name;
  bool required;
};

// Normative key set per section.
const std::map<std::string, std::vector<KeySpec>>& schema() {
  static const std::map<std::string, std::vector<KeySpec>> s{
      {"scene",
       {{"Lx", true}, {"Ly", true}, {"Lz", true}, {"reflectivity", false},
        {"reflectivity_phase_deg", false}, {"max_order", false}, {"c", false}, {"gain", false}}},
      {"grid",
       {{"origin_x", true}, {"origin_y", true}, {"spacing", false}, {"nx", true}, {"ny", true},
        {"height", true}}},
      {"bob", {{"x", true}, {"y", true}, {"z", true}}},
      {"budget", {{"P_T", true}, {"kT", false}, {"N_F", false}, {"b", false}}},
      {"channel",
       {{"f0", false}, {"W", true}, {"M", true}, {"a", true}, {"B_c", true}, {"b_T", true},
        {"T", false}, {"spatial_mode", false}}},
      {"test", {{"alpha", true}, {"regime", true}, {"threshold", false}}},
      {"sweep", {{"axis", true}, {"values", true}}},
      {"run", {{"trials", false}, {"pair_budget", false}, {"seed", true}, {"threads", false}}},
  };
  return s;
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::vector<Diagnostic>& diags)
      : entries_(std::move(entries)), diags_(diags) {}

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  int line_of(const std::string& key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
  }

  void error(const std::string& key, const std::string& what) {
    diags_.push_back({line_of(key), key + ": " + what});
  }

  // Parses a real; reports and returns fallback on failure or when absent.
  double real(const std::string& key, double fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    double v = 0.0;
    if (!parse_real(e->value, v)) {
      error(key, "'" + e->value + "' is not a number");
      return fallback;
    }
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    const Entry* e = find(key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const auto* first = e->value.data();
    const auto* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      error(key, "'" + e->value + "' is not a non-negative integer");
      return fallback;
    }
    return v;
  }

  std::string text(const std::string& key, std::string fallback) {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  void check(const std::string& key, bool ok, const std::string& constraint) {
    if (!ok && find(key)) error(key, "value " + find(key)->value + " violates " + constraint);
  }

  static bool parse_real(const std::string& s, double& out) {
    if (s == "inf" || s == "+inf" || s == "infinity") {
      out = std::numeric_limits<double>::infinity();
      return true;
    }
    const auto* first = s.data();
    const auto* last = first + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !std::isnan(out);
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<Diagnostic>& diags_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

std::string format_diagnostic(const std::filesystem::path& path, const Diagnostic& d) {
  std::string out = path.string();
  if (d.line > 0) out += ":" + std::to_string(d.line);
  return out + ": " + d.message;
}

std::string_view spatial_mode_name(SpatialMode mode) {
  return mode == SpatialMode::IndependentVariation ? "independent" : "fully_correlated";
}

ConfigParse parse_config(const std::string& text) {
  ConfigParse out;
  auto& diags = out.diagnostics;
  std::map<std::string, Entry> entries;

  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        diags.push_back({line_no, "malformed section header '" + line + "'"});
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().contains(section)) {
        diags.push_back({line_no, "unknown section [" + section + "]"});
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      diags.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) {
      diags.push_back({line_no, "key '" + key + "' appears before any section"});
      continue;
    }
    const auto sit = schema().find(section);
    if (sit == schema().end()) continue;  // already reported
    const bool known = std::any_of(sit->second.begin(), sit->second.end(),
                                   [&](const KeySpec& k) { return key == k.name; });
    const std::string full = section + "." + key;
    if (!known) {
      diags.push_back({line_no, "unknown key " + full});
      continue;
    }
    if (entries.contains(full)) {
      diags.push_back({line_no, "duplicate key " + full + " (first on line " +
                                    std::to_string(entries[full].line) + ")"});
      continue;
    }
    if (value.empty()) {
      diags.push_back({line_no, full + ": empty value"});
      continue;
    }
    entries[full] = {value, line_no};
    out.config.entries.emplace_back(full, value);
  }

  for (const auto& [sec, keys] : schema()) {
    for (const auto& k : keys) {
      const std::string full = sec + "." + k.name;
      if (k.required && !entries.contains(full)) {
        diags.push_back({0, "missing required key " + full});
      }
    }
  }

  Reader r(std::move(entries), diags);
  Experiment& e = out.config.experiment;

  // scene
  e.scene.Lx = r.real("scene.Lx", e.scene.Lx);
  e.scene.Ly = r.real("scene.Ly", e.scene.Ly);
  e.scene.Lz = r.real("scene.Lz", e.scene.Lz);
  r.check("scene.Lx", e.scene.Lx > 0 && std::isfinite(e.scene.Lx), "Lx > 0");
  r.check("scene.Ly", e.scene.Ly > 0 && std::isfinite(e.scene.Ly), "Ly > 0");
  r.check("scene.Lz", e.scene.Lz > 0 && std::isfinite(e.scene.Lz), "Lz > 0");
  const double refl = r.real("scene.reflectivity", 0.7);
  const double phase = r.real("scene.reflectivity_phase_deg", 180.0);
  r.check("scene.reflectivity", refl >= 0.0 && refl <= 1.0, "0 <= |reflectivity| <= 1");
  e.scene.reflectivity = std::polar(refl, phase * std::numbers::pi / 180.0);
  e.scene.max_order = static_cast<int>(r.integer("scene.max_order", 4));
  r.check("scene.max_order", e.scene.max_order <= 20, "max_order <= 20");
  e.scene.c = r.real("scene.c", e.scene.c);
  r.check("scene.c", e.scene.c > 0 && std::isfinite(e.scene.c), "c > 0");
  e.scene.gain = r.real("scene.gain", 1.0);
  r.check("scene.gain", e.scene.gain > 0 && std::isfinite(e.scene.gain), "gain > 0");

  // grid
  e.grid.origin_x = r.real("grid.origin_x", 0.0);
  e.grid.origin_y = r.real("grid.origin_y", 0.0);
  e.grid.spacing = r.real("grid.spacing", 0.2);
  r.check("grid.spacing", e.grid.spacing > 0 && std::isfinite(e.grid.spacing), "spacing > 0");
  e.grid.nx = r.integer("grid.nx", 1);
  e.grid.ny = r.integer("grid.ny", 1);
  r.check("grid.nx", e.grid.nx >= 1, "nx >= 1");
  r.check("grid.ny", e.grid.ny >= 1, "ny >= 1");
  e.grid.height = r.real("grid.height", 1.0);

  // bob
  e.bob = {r.real("bob.x", 0.0), r.real("bob.y", 0.0), r.real("bob.z", 0.0)};

  // budget
  e.budget.P_T = r.real("budget.P_T", e.budget.P_T);
  r.check("budget.P_T", e.budget.P_T > 0 && std::isfinite(e.budget.P_T), "P_T > 0");
  e.budget.kT = r.real("budget.kT", e.budget.kT);
  r.check("budget.kT", e.budget.kT > 0 && std::isfinite(e.budget.kT), "kT > 0");
  e.budget.N_F = r.real("budget.N_F", e.budget.N_F);
  r.check("budget.N_F", e.budget.N_F > 0 && std::isfinite(e.budget.N_F), "N_F > 0");
  e.budget.b = r.real("budget.b", e.budget.b);
  r.check("budget.b", e.budget.b > 0 && std::isfinite(e.budget.b), "b > 0");

  // channel
  ChannelParams& c = e.channel;
  c.f0 = r.real("channel.f0", c.f0);
  r.check("channel.f0", c.f0 > 0 && std::isfinite(c.f0), "f0 > 0");
  c.W = r.real("channel.W", c.W);
  r.check("channel.W", c.W > 0 && std::isfinite(c.W), "W > 0");
  c.M = r.integer("channel.M", c.M);
  r.check("channel.M", c.M >= 1 && c.M <= 4096, "1 <= M <= 4096");
  c.a = r.real("channel.a", c.a);
  r.check("channel.a", c.a >= 0.0 && c.a <= 1.0, "the [0, 1] range of a");
  c.Bc = r.real("channel.B_c", c.Bc);
  r.check("channel.B_c", c.Bc >= 0.0, "B_c >= 0");
  e.b_T = r.real("channel.b_T", e.b_T);
  r.check("channel.b_T", e.b_T >= 0.0 && std::isfinite(e.b_T), "b_T >= 0");
  c.T = r.real("channel.T", 0.0);
  r.check("channel.T", c.T >= 0.0 && std::isfinite(c.T), "T >= 0");
  const std::string mode = r.text("channel.spatial_mode", "independent");
  if (mode == "independent") {
    e.mode = SpatialMode::IndependentVariation;
  } else if (mode == "fully_correlated") {
    e.mode = SpatialMode::FullyCorrelatedVariation;
  } else {
    r.error("channel.spatial_mode", "'" + mode + "' is not one of independent, fully_correlated");
  }

  // test
  e.test.alpha = r.real("test.alpha", e.test.alpha);
  r.check("test.alpha", e.test.alpha > 0.0 && e.test.alpha < 1.0, "0 < alpha < 1");
  const std::string regime = r.text("test.regime", "general");
  if (const auto reg = parse_regime(regime)) {
    e.test.regime = *reg;
  } else {
    r.error("test.regime", "'" + regime +
                               "' is not one of general, low_bc, high_bc, unknown, full_spatial, "
                               "time_invariant");
  }
  if (r.find("test.threshold")) {
    const double t = r.real("test.threshold", 0.0);
    r.check("test.threshold", t >= 0.0, "threshold >= 0");
    e.test.threshold_override = t;
  }

  // run
  e.trials = r.integer("run.trials", 10000);
  r.check("run.trials", e.trials >= 1, "trials >= 1");
  e.pair_budget = r.integer("run.pair_budget", 2000);
  r.check("run.pair_budget", e.pair_budget >= 1, "pair_budget >= 1");
  e.seed = r.integer("run.seed", 1);
  e.threads = static_cast<unsigned>(r.integer("run.threads", 1));
  r.check("run.threads", e.threads >= 1 && e.threads <= 256, "1 <= threads <= 256");

  // sweep
  const std::string axis = r.text("sweep.axis", "b_T");
  if (const auto ax = parse_axis(axis)) {
    out.config.axis = *ax;
  } else {
    r.error("sweep.axis", "'" + axis + "' is not one of b_T, W, M, P_T, B_c, spatial_mode");
  }
  if (const auto* values = r.find("sweep.values")) {
    for (const auto& item : split_list(values->value)) {
      double v = 0.0;
      if (out.config.axis == SweepAxis::spatial_mode) {
        if (item == "independent") {
          v = 0.0;
        } else if (item == "fully_correlated") {
          v = 1.0;
        } else {
          r.error("sweep.values", "'" + item + "' is not a spatial mode");
          continue;
        }
      } else if (!Reader::parse_real(item, v)) {
        r.error("sweep.values", "'" + item + "' is not a number");
        continue;
      }
      bool valid = true;
      std::string constraint;
      switch (out.config.axis) {
        case SweepAxis::bT: valid = v >= 0 && std::isfinite(v); constraint = "b_T >= 0"; break;
        case SweepAxis::W: valid = v > 0 && std::isfinite(v); constraint = "W > 0"; break;
        case SweepAxis::M:
          valid = v >= 1 && v <= 4096 && v == std::floor(v);
          constraint = "M a positive integer";
          break;
        case SweepAxis::P_T: valid = v > 0 && std::isfinite(v); constraint = "P_T > 0"; break;
        case SweepAxis::Bc: valid = v >= 0; constraint = "B_c >= 0"; break;
        case SweepAxis::spatial_mode: break;
      }
      if (!valid) {
        r.error("sweep.values", "value " + item + " violates " + constraint);
        continue;
      }
      out.config.values.push_back(v);
    }
    if (out.config.values.empty()) r.error("sweep.values", "no usable sweep values");
  }

  // Cross-field checks only once every field parsed cleanly.
  if (diags.empty()) {
    try {
      e.validate();
    } catch (const std::invalid_argument& ex) {
      diags.push_back({0, ex.what()});
    }
  }
  // File order; whole-file diagnostics last.
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    const auto key = [](int line) { return line == 0 ? std::numeric_limits<int>::max() : line; };
    return key(a.line) < key(b.line);
  });
  return out;
}

ConfigParse load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace physauth
