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

// Experiment drivers behind the CLI subcommands. Each run_* function returns
// plain results; each write_* function renders them as CSV.

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "gaussthermo/dynamics.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/geometry.hpp"
#include "gaussthermo/io/config.hpp"
#include "gaussthermo/io/csv.hpp"
#include "gaussthermo/metrology.hpp"
#include "gaussthermo/parallel.hpp"
#include "gaussthermo/sampler.hpp"

namespace gaussthermo::experiments {

inline constexpr std::string_view kVersion = "1.0.0";

using io::CsvRow;
using io::CsvWriter;
using io::RunConfig;
using io::StateFamily;

namespace detail {

inline void write_preamble(CsvWriter& w, std::string_view command, const RunConfig& c) {
  w.metadata("program", std::string("gaussthermo ") + std::string(kVersion));
  w.metadata("command", command);
  w.metadata("config", io::to_json(c).dump());
}

inline void add_panel(CsvRow& r, const SystemParams& p) {
  r.add(p.m_a).add(p.m_b).add(p.gn);
}

inline void add_matrix(CsvRow& r, const Mat4& m) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r.add(m(i, j));
  }
}

inline std::vector<std::string> matrix_columns() {
  std::vector<std::string> cols;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) cols.push_back("s" + std::to_string(i) + std::to_string(j));
  }
  return cols;
}

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace detail

// ---------------------------------------------------------------- speed-scan

struct SpeedRecord {
  GeneratedState state;
  SpeedSample speed;
};

struct SpeedPanel {
  SystemParams params;
  std::vector<SpeedRecord> samples;
  std::vector<LowerBoundBin> bound;
};

inline SpeedPanel run_speed_panel(const RunConfig& c, const SystemParams& p) {
  SpeedPanel panel;
  panel.params = p;
  const InitialSpeedEvaluator eval(p, c.epsilon);
  panel.samples.resize(c.samples);
  parallel_for(
      c.samples,
      [&](std::size_t i) {
        auto& rec = panel.samples[i];
        rec.state = generate_state(c.seed, i);
        rec.speed = eval(rec.state.sigma);
      },
      c.threads);
  LowerBoundOptions opt;
  opt.grid_points = c.bound_grid_points;
  opt.max_variance = c.bound_max_variance;
  opt.threads = c.threads;
  panel.bound = speed_lower_bound(io::lower_bound_edges(c), p, c.epsilon, opt);
  return panel;
}

inline std::vector<SpeedPanel> run_speed_scan(const RunConfig& c) {
  std::vector<SpeedPanel> out;
  for (const auto& p : io::panel_params(c)) out.push_back(run_speed_panel(c, p));
  return out;
}

inline void write_speed_scan(std::ostream& os, const RunConfig& c,
                             const std::vector<SpeedPanel>& panels) {
  CsvWriter w(os);
  detail::write_preamble(w, "speed-scan", c);
  w.metadata("sampling_measure", kSamplingMeasure);
  w.header({"m_a", "m_b", "gn", "record", "index", "mu1", "mu2", "mu", "delta",
            "region", "nu_tilde_minus", "classification", "v_squared", "excluded",
            "nu_lo", "nu_hi"});
  for (const auto& panel : panels) {
    for (const auto& rec : panel.samples) {
      CsvRow r;
      detail::add_panel(r, panel.params);
      const auto& s = rec.speed;
      r.add("sample").add(static_cast<unsigned long long>(rec.state.index));
      r.add(s.mu1).add(s.mu2).add(s.mu).add(s.delta).add(to_string(rec.state.region));
      r.add(s.nu_tilde_minus).add(to_string(s.classification));
      if (s.excluded) r.empty(); else r.add(s.v_squared);
      r.add(s.excluded).empty().empty();
      w.row(r);
    }
    for (const auto& bin : panel.bound) {
      CsvRow r;
      detail::add_panel(r, panel.params);
      r.add("bound").empty();
      if (bin.present) {
        r.add(bin.mu1).add(bin.mu2).add(bin.mu).empty().empty().add(bin.nu);
        r.add("entangled").add(bin.v_squared).add(false);
      } else {
        r.empty().empty().empty().empty().empty().empty().empty().empty().add(true);
      }
      r.add(bin.nu_lo).add(bin.nu_hi);
      w.row(r);
    }
  }
  w.flush();
}

// ------------------------------------------------------------------ qfi-scan

struct QfiSeries {
  SystemParams params;
  StateFamily family = StateFamily::thermal;
  std::vector<QfiPoint> points;
};

inline std::vector<StateFamily> qfi_families(const RunConfig& c) {
  if (c.state) return {*c.state};
  return {StateFamily::thermal, StateFamily::local_squeeze, StateFamily::twin_beam};
}

inline std::vector<QfiSeries> run_qfi_scan(const RunConfig& c) {
  const auto grid = make_time_grid(c.t_max, c.n_points, c.spacing);
  std::vector<QfiSeries> out;
  for (const auto& p : io::panel_params(c)) {
    const QfiEvaluator qfi(p, c.dm, c.bath_shift);
    const double temperature =
        p.m_a > 0.0 ? temperature_from_occupation(p.omega_a, p.m_a) : 0.0;
    for (StateFamily fam : qfi_families(c)) {
      const CovarianceMatrix sigma0 = io::initial_state(c, fam);
      QfiSeries series{p, fam, std::vector<QfiPoint>(grid.size())};
      parallel_for(
          grid.size(),
          [&](std::size_t i) {
            QfiPoint& pt = series.points[i];
            pt.t = grid[i];
            pt.q_m = qfi(sigma0, grid[i]);
            pt.q_t = temperature > 0.0
                         ? qfi_temperature(pt.q_m, p.omega_a, temperature)
                         : detail::nan();
          },
          c.threads);
      out.push_back(std::move(series));
    }
  }
  return out;
}

inline void write_qfi_scan(std::ostream& os, const RunConfig& c,
                           const std::vector<QfiSeries>& series) {
  CsvWriter w(os);
  detail::write_preamble(w, "qfi-scan", c);
  w.header({"m_a", "m_b", "gn", "family", "t", "q_m", "q_t"});
  for (const auto& s : series) {
    for (const auto& pt : s.points) {
      CsvRow r;
      detail::add_panel(r, s.params);
      r.add(io::to_string(s.family)).add(pt.t).add(pt.q_m);
      if (std::isnan(pt.q_t)) r.empty(); else r.add(pt.q_t);
      w.row(r);
    }
  }
  w.flush();
}

// -------------------------------------------------------------- steady-state

struct SteadyResult {
  SystemParams params;
  double max_re_lambda = 0.0;
  bool stable = false;
  std::string message;
  Mat4 sigma = Mat4::Zero();
  SymplecticSpectrum nu;
  double nu_tilde_minus = detail::nan();
  double purity = detail::nan();
};

inline SteadyResult run_steady_point(const SystemParams& p) {
  SteadyResult r;
  r.params = p;
  const DriftMatrix a = build_drift(p);
  r.max_re_lambda = spectral_abscissa(a);
  r.stable = r.max_re_lambda < -kStabilityTolerance;
  if (!r.stable) {
    r.message = "unstable drift: max Re(lambda) = " + io::format_double(r.max_re_lambda) +
                " >= 0; no steady state";
    return r;
  }
  const CovarianceMatrix s = solve_steady(a, build_diffusion(p));
  r.sigma = s.matrix();
  r.nu = symplectic_eigenvalues(s);
  r.nu_tilde_minus = ppt_min_eigenvalue(s);
  r.purity = purity(s);
  return r;
}

inline std::vector<SteadyResult> run_steady_state(const RunConfig& c) {
  std::vector<SteadyResult> out;
  for (const auto& p : io::panel_params(c)) out.push_back(run_steady_point(p));
  return out;
}

inline void write_steady_state(std::ostream& os, const RunConfig& c,
                               const std::vector<SteadyResult>& results) {
  CsvWriter w(os);
  detail::write_preamble(w, "steady-state", c);
  std::vector<std::string> cols = {"status", "m_a", "m_b", "gn", "max_re_lambda"};
  for (auto& col : detail::matrix_columns()) cols.push_back(col);
  for (const char* col : {"nu_plus", "nu_minus", "nu_tilde_minus", "purity", "message"}) {
    cols.emplace_back(col);
  }
  w.header(cols);
  for (const auto& res : results) {
    CsvRow r;
    r.add(res.stable ? "ok" : "unstable");
    detail::add_panel(r, res.params);
    r.add(res.max_re_lambda);
    if (res.stable) {
      detail::add_matrix(r, res.sigma);
      r.add(res.nu.nu_plus).add(res.nu.nu_minus).add(res.nu_tilde_minus).add(res.purity);
      r.empty();
    } else {
      for (int i = 0; i < 20; ++i) r.empty();
      r.add(res.message);
    }
    w.row(r);
  }
  w.flush();
}

// ----------------------------------------------------------------- propagate

struct PropagatePoint {
  double t = 0.0;
  CovarianceMatrix sigma;
  SymplecticSpectrum nu;
  double nu_tilde_minus = 1.0;
  double purity = 1.0;
  double v_squared = detail::nan();
};

inline std::vector<PropagatePoint> run_propagate(const RunConfig& c) {
  const auto grid = make_time_grid(c.t_max, c.n_points, c.spacing);
  const CovarianceMatrix sigma0 =
      io::initial_state(c, c.state.value_or(StateFamily::thermal));
  const Propagator prop(c.params);
  std::vector<PropagatePoint> out(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        PropagatePoint& pt = out[i];
        pt.t = grid[i];
        pt.sigma = prop(sigma0, grid[i]);
        pt.nu = symplectic_eigenvalues(pt.sigma);
        pt.nu_tilde_minus = ppt_min_eigenvalue(pt.sigma);
        pt.purity = purity(pt.sigma);
        try {
          pt.v_squared = riemannian_speed(pt.sigma, prop.rate(pt.sigma));
        } catch (const SingularMetricError&) {
          pt.v_squared = detail::nan();
        }
      },
      c.threads);
  return out;
}

inline void write_propagate(std::ostream& os, const RunConfig& c,
                            const std::vector<PropagatePoint>& points) {
  CsvWriter w(os);
  detail::write_preamble(w, "propagate", c);
  std::vector<std::string> cols = {"t"};
  for (auto& col : detail::matrix_columns()) cols.push_back(col);
  for (const char* col : {"nu_plus", "nu_minus", "nu_tilde_minus", "purity", "v_squared"}) {
    cols.emplace_back(col);
  }
  w.header(cols);
  for (const auto& pt : points) {
    CsvRow r;
    r.add(pt.t);
    detail::add_matrix(r, pt.sigma.matrix());
    r.add(pt.nu.nu_plus).add(pt.nu.nu_minus).add(pt.nu_tilde_minus).add(pt.purity);
    if (std::isnan(pt.v_squared)) r.empty(); else r.add(pt.v_squared);
    w.row(r);
  }
  w.flush();
}

// ------------------------------------------------------------- sample-states

inline std::vector<GeneratedState> run_sample_states(const RunConfig& c) {
  std::vector<GeneratedState> out(c.samples);
  parallel_for(
      c.samples, [&](std::size_t i) { out[i] = generate_state(c.seed, i); }, c.threads);
  return out;
}

inline void write_sample_states(std::ostream& os, const RunConfig& c,
                                const std::vector<GeneratedState>& states) {
  CsvWriter w(os);
  detail::write_preamble(w, "sample-states", c);
  w.metadata("sampling_measure", kSamplingMeasure);
  w.header({"index", "mu1", "mu2", "mu", "delta", "region", "a", "b", "c_plus",
            "c_minus", "nu_tilde_minus", "classification"});
  for (const auto& g : states) {
    const SimonInvariants inv = simon_form(g.sigma);
    CsvRow r;
    r.add(static_cast<unsigned long long>(g.index));
    r.add(g.triple.mu1).add(g.triple.mu2).add(g.triple.mu).add(g.triple.delta);
    r.add(to_string(g.region));
    r.add(inv.a).add(inv.b).add(inv.c_plus).add(inv.c_minus);
    const double nt = symplectic_eigenvalues(inv.partially_transposed()).nu_minus;
    r.add(nt).add(nt < 1.0 - kSeparabilityTolerance ? "entangled" : "separable");
    w.row(r);
  }
  w.flush();
}

}  // namespace gaussthermo::experiments
