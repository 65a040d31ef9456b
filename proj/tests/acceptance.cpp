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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace gt = gaussthermo;
namespace io = gaussthermo::io;
namespace ex = gaussthermo::experiments;
using gt::CovarianceMatrix;
using gt::Mat4;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

gt::SystemParams symmetric(double m, double gn) {
  gt::SystemParams p;
  p.m_a = p.m_b = m;
  p.gn = gn;
  return p;
}

Outcome steady_state_oracle() {
  double worst = 0.0;
  for (double ma : {0.1, 0.5, 1.0}) {
    for (double mb : {0.1, 0.5, 1.0}) {
      gt::SystemParams p;
      p.m_a = ma;
      p.m_b = mb;
      const Mat4 s = gt::solve_steady(gt::build_drift(p), gt::build_diffusion(p)).matrix();
      const Mat4 e = Eigen::Vector4d(1 + 2 * ma, 1 + 2 * ma, 1 + 2 * mb, 1 + 2 * mb).asDiagonal();
      worst = std::max(worst, oracle::max_abs(s - e));
    }
  }
  return {worst <= 1e-10, fmt("max entry error %.3e over 9 (M_a, M_b) pairs", worst)};
}

Outcome lyapunov_and_semigroup() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> w(0.5, 2.0), k(0.02, 0.5), m(0.0, 2.0), g(0.0, 1.5),
      t(0.0, 30.0);
  double worst_res = 0.0, worst_semi = 0.0;
  int n = 0;
  while (n < 100) {
    gt::SystemParams p;
    p.omega_a = w(rng);
    p.omega_b = w(rng);
    p.k_a = k(rng);
    p.k_b = k(rng);
    p.m_a = m(rng);
    p.m_b = m(rng);
    p.gn = g(rng);
    if (!gt::is_stable(gt::build_drift(p))) continue;
    ++n;
    const gt::Propagator prop(p);
    worst_res = std::max(worst_res, gt::lyapunov_residual(prop.drift(), prop.diffusion(),
                                                          prop.steady_state().matrix()));
    const CovarianceMatrix s0(oracle::random_physical(rng));
    const double t1 = t(rng), t2 = t(rng);
    worst_semi = std::max(worst_semi, oracle::max_abs(prop(prop(s0, t1), t2).matrix() -
                                                      prop(s0, t1 + t2).matrix()));
  }
  return {worst_res <= 1e-10 && worst_semi <= 1e-10,
          fmt("100 stable systems: max residual %.3e, max semigroup error %.3e", worst_res,
              worst_semi)};
}

Outcome fidelity_oracle() {
  double worst = 0.0, worst_self = 0.0;
  const double ms[] = {0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  for (double a1 : ms) {
    for (double a2 : ms) {
      for (double b1 : {0.0, 0.1, 1.0}) {
        for (double b2 : {0.1, 0.5}) {
          const auto s1 = gt::thermal_state(a1, b1);
          const auto s2 = gt::thermal_state(a2, b2);
          const double f = gt::uhlmann_fidelity(s1, s2);
          const double o =
              oracle::thermal_fidelity_fock(a1, a2) * oracle::thermal_fidelity_fock(b1, b2);
          worst = std::max(worst, std::abs(f - o));
          worst_self = std::max(worst_self, std::abs(gt::uhlmann_fidelity(s1, s1) - 1.0));
        }
      }
    }
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const CovarianceMatrix s(oracle::random_physical(rng));
    worst_self = std::max(worst_self, std::abs(gt::uhlmann_fidelity(s, s) - 1.0));
  }
  return {worst <= 1e-8 && worst_self <= 1e-12,
          fmt("max |F - Fock oracle| %.3e, max |F(s,s) - 1| %.3e", worst, worst_self)};
}

Outcome qfi_oracle() {
  bool ok = true;
  std::string detail;
  for (double m : {0.1, 0.5, 1.0}) {
    const auto p = symmetric(m, 0.0);
    const auto s0 = gt::Propagator(p).steady_state();
    const double t = 50.0;
    const double q1 = gt::qfi_occupation(s0, p, t, 1e-3);
    const double q2 = gt::qfi_occupation(s0, p, t, 5e-4);
    const double analytic = 2.0 / (m * (m + 1.0));
    const double rel = std::abs(q1 / analytic - 1.0);
    const double drift = std::abs(q2 / q1 - 1.0);
    ok = ok && rel < 1e-2 && drift < 1e-3;
    detail += fmt("M=%.1f Q=%.5f (analytic %.5f, rel %.1e, halving %.1e); ", m, q1, analytic,
                  rel, drift);
  }
  return {ok, detail};
}

Outcome metric_qfi_consistency() {
  double worst = 0.0;
  for (double gn : {0.0}) {
    for (double m : {0.1, 0.5, 1.0}) {
      const double dm = 1e-3;
      const auto p = symmetric(m, gn);
      // Thermal family: initial thermal state at M, evolved at bath M.
      for (double t : {1.0, 10.0, 100.0}) {
        const auto s0 = gt::thermal_state(0.1, 0.1);
        const double q = gt::qfi_occupation(s0, p, t, dm);
        // ds_B/dM from a metric increment much smaller than dM.
        const double h = 1e-6;
        const auto lo = gt::Propagator(symmetric(m, gn))(s0, t);
        const auto hi = gt::Propagator(symmetric(m + h, gn))(s0, t);
        const double ds2 = gt::bures_increment(gt::symplectic_eigenvalues(lo),
                                               gt::symplectic_eigenvalues(hi));
        worst = std::max(worst, std::abs(4.0 * ds2 / (h * h) / q - 1.0));
      }
    }
  }
  return {worst <= 1e-3, fmt("max relative gap %.3e over M in {0.1,0.5,1}, t in {1,10,100}", worst)};
}

Outcome ppt_oracle() {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    worst = std::max(worst, std::abs(gt::ppt_min_eigenvalue(gt::twin_beam(r)) - std::exp(-2 * r)));
  }
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> m(0.0, 3.0), r(-2.0, 2.0), th(0.0, 6.3);
  int misclassified = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = gt::local_rotation(gt::local_squeeze(gt::thermal_state(m(rng), m(rng)), r(rng), r(rng)),
                                      th(rng), th(rng));
    if (gt::classify_separability(s) != gt::Separability::separable) ++misclassified;
  }
  return {worst <= 1e-9 && misclassified == 0,
          fmt("max |nu~ - e^{-2r}| %.3e; %d of 2000 product states misclassified", worst,
              misclassified)};
}

Outcome bures_additivity() {
  const auto grid = gt::make_time_grid(100.0, 201);
  double worst = 0.0;
  int points = 0;
  for (double m : {0.1, 0.5, 1.0}) {
    const auto p = symmetric(m, 0.0);
    const gt::Propagator prop(p);
    for (const auto& s0 : {gt::thermal_state(0.1, 0.1), gt::thermal_state(0.0, 2.0),
                           gt::local_squeeze(CovarianceMatrix::vacuum(), 2.0, -2.0),
                           gt::local_squeeze(gt::thermal_state(0.3, 0.0), 0.5, 1.0)}) {
      for (double t : grid) {
        const auto s = prop(s0, t);
        const Mat4 dot = prop.rate(s);
        try {
          const double gap = std::abs(gt::riemannian_speed(s, dot) -
                                      gt::local_speed(s, dot, gt::Mode::a) -
                                      gt::local_speed(s, dot, gt::Mode::b));
          worst = std::max(worst, gap);
          ++points;
        } catch (const gt::SingularMetricError&) {
        }
      }
    }
  }
  double twin_gap = 0.0;
  {
    const auto p = symmetric(0.1, 0.0);
    const gt::Propagator prop(p);
    for (double t : grid) {
      const auto s = prop(gt::twin_beam(1.0), t);
      const Mat4 dot = prop.rate(s);
      try {
        twin_gap = std::max(twin_gap, std::abs(gt::riemannian_speed(s, dot) -
                                               gt::local_speed(s, dot, gt::Mode::a) -
                                               gt::local_speed(s, dot, gt::Mode::b)));
      } catch (const gt::SingularMetricError&) {
      }
    }
  }
  return {worst <= 1e-8 && twin_gap > 1e-3 && points > 2000,
          fmt("product states: max gap %.3e over %d points; twin_beam(1): max gap %.3e", worst,
              points, twin_gap)};
}

Outcome fig2_properties() {
  io::RunConfig c;
  c.panels = true;
  c.samples = 10000;
  c.epsilon = 1e-3;
  c.threads = 0;
  const auto panels = ex::run_speed_scan(c);
  bool ok = panels.size() == 6;
  std::string detail;
  std::size_t total = 0, below = 0, unbinned = 0;
  for (const auto& panel : panels) {
    for (const auto& rec : panel.samples) {
      const auto& s = rec.speed;
      if (s.excluded || s.classification != gt::Separability::entangled) continue;
      const auto bin = gt::find_bin(panel.bound, s.nu_tilde_minus);
      if (!bin || !panel.bound[*bin].present) {
        ++unbinned;
        continue;
      }
      ++total;
      if (s.v_squared < panel.bound[*bin].v_squared - 1e-9) ++below;
    }
  }
  const double frac = total ? 1.0 - static_cast<double>(below) / static_cast<double>(total) : 0.0;
  ok = ok && total > 0 && frac >= 0.999;
  detail += fmt("(i) %zu/%zu entangled samples on or above the bound (%.4f%%), %zu below "
                "the first bin edge skipped; ",
                total - below, total, 100.0 * frac, unbinned);

  gt::LowerBoundOptions opt;
  opt.threads = 0;
  for (double gn : {0.0, 0.35}) {
    double prev = -1.0;
    bool mono = true;
    detail += fmt("(ii) GN=%.2f bound at 0.2:", gn);
    for (double m : {0.1, 0.5, 1.0}) {
      const auto b = gt::speed_lower_bound({0.2}, symmetric(m, gn), c.epsilon, opt);
      const double v = b[0].present ? b[0].v_squared : NAN;
      mono = mono && b[0].present && v > prev;
      prev = v;
      detail += fmt(" %.4g", v);
    }
    detail += mono ? " rising; " : " NOT rising; ";
    ok = ok && mono;
  }
  return {ok, detail};
}

Outcome fig3_properties() {
  io::RunConfig c;
  c.panels = true;
  c.threads = 0;
  const auto series = ex::run_qfi_scan(c);
  bool ok = series.size() == 18;
  int argmax_fail = 0, early_fail = 0, t95_fail = 0;
  double worst_argmax = 0.0;
  std::string detail;
  const std::size_t n = c.n_points;
  const auto early = static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(n - 1)));
  for (std::size_t i = 0; i < series.size(); i += 3) {
    const auto& th = series[i];
    const auto& ls = series[i + 1];
    const auto& tb = series[i + 2];
    ok = ok && th.family == io::StateFamily::thermal &&
         ls.family == io::StateFamily::local_squeeze && tb.family == io::StateFamily::twin_beam;
    for (const auto* s : {&th, &ls, &tb}) {
      double peak = 0.0;
      for (const auto& pt : s->points) peak = std::max(peak, pt.q_m);
      const double last = s->points.back().q_m;
      // The final point is the maximum up to round-off of 1 - F.
      const double rel = (peak - last) / peak;
      worst_argmax = std::max(worst_argmax, rel);
      if (rel > 1e-6) ++argmax_fail;
    }
    if (th.params.m_a == 0.1) {
      for (std::size_t k = 1; k <= early; ++k) {
        if (!(ls.points[k].q_m > th.points[k].q_m && tb.points[k].q_m > th.points[k].q_m)) {
          ++early_fail;
        }
      }
      std::size_t lead = 0;
      while (lead + 1 < n && ls.points[lead + 1].q_m > th.points[lead + 1].q_m &&
             tb.points[lead + 1].q_m > th.points[lead + 1].q_m) {
        ++lead;
      }
      detail += fmt("[M=0.1 GN=%.2f squeezed ahead through t=%.1f, window ends t=%.1f] ",
                    th.params.gn, th.points[lead].t, th.points[early].t);
    }
    auto t95 = [](const ex::QfiSeries& s) {
      const double target = 0.95 * s.points.back().q_m;
      for (const auto& pt : s.points) {
        if (pt.q_m >= target) return pt.t;
      }
      return std::numeric_limits<double>::infinity();
    };
    const double a = t95(th), b = t95(tb);
    if (!(a < b)) ++t95_fail;
    detail += fmt("[M=%.1f GN=%.2f t95 %.1f vs %.1f] ", th.params.m_a, th.params.gn, a, b);
  }
  ok = ok && argmax_fail == 0 && early_fail == 0 && t95_fail == 0;
  return {ok, fmt("(i) %d series with max before the end (worst shortfall %.1e); (ii) %d "
                  "early points where a squeezed family fails to beat thermal (first %zu "
                  "points, M=0.1); (iii) %d panels with thermal not first to 95%%; ",
                  argmax_fail, worst_argmax, early_fail, early, t95_fail) +
              detail};
}

Outcome determinism() {
  auto render_speed = [](unsigned threads) {
    io::RunConfig c;
    c.panels = true;
    c.samples = 2000;
    c.bound_grid_points = 8;
    c.nu_bin_width = 0.1;
    c.threads = threads;
    std::ostringstream os;
    ex::write_speed_scan(os, c, ex::run_speed_scan(c));
    return os.str();
  };
  auto render_qfi = [](unsigned threads) {
    io::RunConfig c;
    c.panels = true;
    c.n_points = 41;
    c.threads = threads;
    std::ostringstream os;
    ex::write_qfi_scan(os, c, ex::run_qfi_scan(c));
    return os.str();
  };
  const std::string s1 = render_speed(1), s2 = render_speed(1), s3 = render_speed(4);
  const std::string q1 = render_qfi(1), q2 = render_qfi(3);
  const bool ok = s1 == s2 && s1 == s3 && q1 == q2 && !s1.empty();
  return {ok, fmt("speed-scan %zu bytes identical across runs/threads: %s; qfi-scan %zu bytes: %s",
                  s1.size(), (s1 == s2 && s1 == s3) ? "yes" : "no", q1.size(),
                  q1 == q2 ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"steady-state oracle (GN=0)", 1.0, steady_state_oracle},
      {"Lyapunov residual and semigroup sweep", 5.0, lyapunov_and_semigroup},
      {"fidelity vs Fock oracle", 0.0, fidelity_oracle},
      {"steady QFI vs 2/(M(M+1))", 5.0, qfi_oracle},
      {"metric-QFI consistency", 0.0, metric_qfi_consistency},
      {"PPT eigenvalue oracle", 0.0, ppt_oracle},
      {"Bures additivity and twin-beam witness", 0.0, bures_additivity},
      {"speed-vs-entanglement properties", 120.0, fig2_properties},
      {"QFI-vs-time properties", 120.0, fig3_properties},
      {"deterministic output", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      pass = false;
      o.detail += fmt(" [over time limit %.0f s]", c.time_limit_s);
    }
    std::printf("[%s] %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}
