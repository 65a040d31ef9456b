// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration shared by every CLI subcommand. Parsed from a flat JSON
// document; command-line flags are applied on top by the caller.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussthermo/dynamics.hpp"
#include "gaussthermo/errors.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/geometry.hpp"
#include "gaussthermo/metrology.hpp"
#include "gaussthermo/sampler.hpp"

namespace gaussthermo::io {

enum class StateFamily { thermal, local_squeeze, twin_beam, file };

inline std::string to_string(StateFamily f) {
  switch (f) {
    case StateFamily::thermal: return "thermal";
    case StateFamily::local_squeeze: return "local-squeeze";
    case StateFamily::twin_beam: return "twin-beam";
    case StateFamily::file: return "file";
  }
  return "unknown";
}

inline StateFamily parse_state_family(const std::string& s) {
  if (s == "thermal") return StateFamily::thermal;
  if (s == "local-squeeze") return StateFamily::local_squeeze;
  if (s == "twin-beam") return StateFamily::twin_beam;
  if (s == "file") return StateFamily::file;
  throw ConfigError("field 'state': unknown initial state '" + s +
                    "' (expected thermal|local-squeeze|twin-beam|file)");
}

inline std::string to_string(BathShift s) {
  switch (s) {
    case BathShift::both: return "both";
    case BathShift::a: return "a";
    case BathShift::b: return "b";
  }
  return "unknown";
}

inline BathShift parse_bath_shift(const std::string& s) {
  if (s == "both") return BathShift::both;
  if (s == "a") return BathShift::a;
  if (s == "b") return BathShift::b;
  throw ConfigError("field 'bath_shift': expected both|a|b, got '" + s + "'");
}

inline std::string to_string(GridSpacing s) {
  return s == GridSpacing::linear ? "linear" : "log";
}

inline GridSpacing parse_spacing(const std::string& s) {
  if (s == "linear") return GridSpacing::linear;
  if (s == "log") return GridSpacing::log;
  throw ConfigError("field 'spacing': expected linear|log, got '" + s + "'");
}

struct RunConfig {
  SystemParams params{1.0, 1.0, 0.0, 0.1, 0.1, 0.1, 0.1};

  // time grid
  double t_max = 100.0;
  std::size_t n_points = 201;
  GridSpacing spacing = GridSpacing::linear;

  double dm = kDefaultOccupationStep;
  BathShift bath_shift = BathShift::both;
  double epsilon = kDefaultEpsilon;

  std::uint64_t seed = 1;
  std::size_t samples = 10000;

  /// Unset means "every built-in family" for qfi-scan and thermal elsewhere.
  std::optional<StateFamily> state;
  double state_m_a = 0.1;
  double state_m_b = 0.1;
  double r = 2.0;
  double r_a = 2.0;
  double r_b = -2.0;
  std::string state_file;

  /// Run the six (M, GN) configurations M in {0.1, 0.5, 1} x GN in {0, 0.35}.
  bool panels = false;

  double nu_bin_width = 0.02;
  double nu_min = 0.005;
  std::size_t bound_grid_points = 24;
  double bound_max_variance = 1e3;

  unsigned threads = 0;
  std::string out;

  void validate() const {
    auto require = [](bool ok, const std::string& field, const std::string& what) {
      if (!ok) throw ConfigError("field '" + field + "': " + what);
    };
    auto finite_pos = [&](double v, const char* f) {
      require(std::isfinite(v) && v > 0.0, f, "must be a finite number > 0");
    };
    auto finite_nonneg = [&](double v, const char* f) {
      require(std::isfinite(v) && v >= 0.0, f, "must be a finite number >= 0");
    };
    finite_pos(params.omega_a, "omega_a");
    finite_pos(params.omega_b, "omega_b");
    finite_pos(params.k_a, "k_a");
    finite_pos(params.k_b, "k_b");
    finite_nonneg(params.gn, "gn");
    finite_nonneg(params.m_a, "m_a");
    finite_nonneg(params.m_b, "m_b");
    require(n_points >= 1, "n_points", "must be >= 1");
    if (n_points > 1) finite_pos(t_max, "t_max");
    require(std::isfinite(dm) && dm >= kMinOccupationStep, "dm",
            "must be >= " + std::to_string(kMinOccupationStep));
    finite_pos(epsilon, "epsilon");
    finite_nonneg(state_m_a, "state_m_a");
    finite_nonneg(state_m_b, "state_m_b");
    require(std::isfinite(r) && std::isfinite(r_a) && std::isfinite(r_b), "r",
            "squeezing parameters must be finite");
    require(!(state == StateFamily::file && state_file.empty()), "state_file",
            "required when state = file");
    require(std::isfinite(nu_bin_width) && nu_bin_width > 0.0 && nu_bin_width <= 1.0,
            "nu_bin_width", "must lie in (0, 1]");
    require(std::isfinite(nu_min) && nu_min > 0.0 && nu_min < 1.0, "nu_min",
            "must lie in (0, 1)");
    require(bound_grid_points >= 2, "bound_grid_points", "must be >= 2");
    require(std::isfinite(bound_max_variance) && bound_max_variance > 1.0,
            "bound_max_variance", "must be > 1");
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["omega_a"] = c.params.omega_a;
  j["omega_b"] = c.params.omega_b;
  j["k_a"] = c.params.k_a;
  j["k_b"] = c.params.k_b;
  j["gn"] = c.params.gn;
  j["m_a"] = c.params.m_a;
  j["m_b"] = c.params.m_b;
  j["t_max"] = c.t_max;
  j["n_points"] = c.n_points;
  j["spacing"] = to_string(c.spacing);
  j["dm"] = c.dm;
  j["bath_shift"] = to_string(c.bath_shift);
  j["epsilon"] = c.epsilon;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["state"] = c.state ? to_string(*c.state) : "all";
  j["state_m_a"] = c.state_m_a;
  j["state_m_b"] = c.state_m_b;
  j["r"] = c.r;
  j["r_a"] = c.r_a;
  j["r_b"] = c.r_b;
  j["state_file"] = c.state_file;
  j["panels"] = c.panels;
  j["nu_bin_width"] = c.nu_bin_width;
  j["nu_min"] = c.nu_min;
  j["bound_grid_points"] = c.bound_grid_points;
  j["bound_max_variance"] = c.bound_max_variance;
  return j;
}

/// Applies the keys present in `j` to `c`. Unknown keys are rejected.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "omega_a") c.params.omega_a = value.get<double>();
      else if (key == "omega_b") c.params.omega_b = value.get<double>();
      else if (key == "k_a") c.params.k_a = value.get<double>();
      else if (key == "k_b") c.params.k_b = value.get<double>();
      else if (key == "gn") c.params.gn = value.get<double>();
      else if (key == "m_a") c.params.m_a = value.get<double>();
      else if (key == "m_b") c.params.m_b = value.get<double>();
      else if (key == "t_max") c.t_max = value.get<double>();
      else if (key == "n_points") c.n_points = value.get<std::size_t>();
      else if (key == "spacing") c.spacing = parse_spacing(value.get<std::string>());
      else if (key == "dm") c.dm = value.get<double>();
      else if (key == "bath_shift") c.bath_shift = parse_bath_shift(value.get<std::string>());
      else if (key == "epsilon") c.epsilon = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "samples") c.samples = value.get<std::size_t>();
      else if (key == "state") {
        const auto s = value.get<std::string>();
        c.state = s == "all" ? std::nullopt : std::optional(parse_state_family(s));
      }
      else if (key == "state_m_a") c.state_m_a = value.get<double>();
      else if (key == "state_m_b") c.state_m_b = value.get<double>();
      else if (key == "r") c.r = value.get<double>();
      else if (key == "r_a") c.r_a = value.get<double>();
      else if (key == "r_b") c.r_b = value.get<double>();
      else if (key == "state_file") c.state_file = value.get<std::string>();
      else if (key == "panels") c.panels = value.get<bool>();
      else if (key == "nu_bin_width") c.nu_bin_width = value.get<double>();
      else if (key == "nu_min") c.nu_min = value.get<double>();
      else if (key == "bound_grid_points") c.bound_grid_points = value.get<std::size_t>();
      else if (key == "bound_max_variance") c.bound_max_variance = value.get<double>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw ConfigError("config: unknown field '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("field '" + key + "': " + e.what());
    }
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_json(base, j);
  return base;
}

/// Reads 16 whitespace-separated numbers (row-major); '#' starts a comment.
inline CovarianceMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("field 'state_file': bad number '" + tok + "' in " + path);
      }
    }
  }
  if (values.size() != 16) {
    throw ConfigError("field 'state_file': expected 16 entries in " + path + ", got " +
                      std::to_string(values.size()));
  }
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = values[static_cast<std::size_t>(4 * i + j)];
  }
  try {
    return CovarianceMatrix(m);
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("field 'state_file': ") + e.what());
  }
}

/// Initial covariance matrix for a family using the config's parameters.
inline CovarianceMatrix initial_state(const RunConfig& c, StateFamily family) {
  switch (family) {
    case StateFamily::thermal: return thermal_state(c.state_m_a, c.state_m_b);
    case StateFamily::local_squeeze:
      return local_squeeze(CovarianceMatrix::vacuum(), c.r_a, c.r_b);
    case StateFamily::twin_beam: return twin_beam(c.r);
    case StateFamily::file: {
      auto sigma = load_matrix_file(c.state_file);
      if (const auto report = validate_physical(sigma); !report) {
        throw ConfigError("field 'state_file': unphysical covariance matrix: " +
                          report.diagnostic);
      }
      return sigma;
    }
  }
  throw ConfigError("field 'state': unsupported family");
}

/// Bin edges {nu_min, w, 2w, ..., 1} for the lower-bound curve.
inline std::vector<double> lower_bound_edges(const RunConfig& c) {
  std::vector<double> edges = {c.nu_min};
  const auto n = static_cast<std::size_t>(std::llround(1.0 / c.nu_bin_width));
  for (std::size_t i = 1; i <= n; ++i) {
    const double e = std::min(1.0, c.nu_bin_width * static_cast<double>(i));
    if (e > edges.back()) edges.push_back(e);
  }
  if (edges.back() < 1.0) edges.push_back(1.0);
  return edges;
}

/// (M, GN) pairs a run covers: the configured point, or the six panels.
inline std::vector<SystemParams> panel_params(const RunConfig& c) {
  if (!c.panels) return {c.params};
  std::vector<SystemParams> out;
  for (double gn : {0.0, 0.35}) {
    for (double m : {0.1, 0.5, 1.0}) {
      SystemParams p = c.params;
      p.gn = gn;
      p.m_a = p.m_b = m;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace gaussthermo::io
