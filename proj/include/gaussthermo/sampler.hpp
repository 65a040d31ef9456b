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

// Random two-mode Gaussian states in standard form, drawn through their
// purities (mu1, mu2, mu) and seralian Delta, together with the separability
// regions of that parameter space and the maximally entangled family (GMEMS)
// that bounds the initial speed from below.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gaussthermo/dynamics.hpp"
#include "gaussthermo/errors.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/geometry.hpp"
#include "gaussthermo/parallel.hpp"

namespace gaussthermo {

struct PurityTriple {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double mu = 1.0;
  double delta = 2.0;
};

namespace purity_bounds {

inline double mu_lower(double mu1, double mu2) { return mu1 * mu2; }

inline double mu_upper(double mu1, double mu2) {
  const double p = mu1 * mu2;
  return p / (p + std::abs(mu1 - mu2));
}

inline double delta_lower(double mu1, double mu2, double mu) {
  const double p = mu1 * mu2;
  const double d = mu1 - mu2;
  return 2.0 / mu + d * d / (p * p);
}

inline double delta_upper(double mu1, double mu2, double mu) {
  const double p = mu1 * mu2;
  const double s = mu1 + mu2;
  return std::min(s * s / (p * p) - 2.0 / mu, 1.0 + 1.0 / (mu * mu));
}

/// Empty when the triple is admissible, otherwise the violated inequality.
inline std::string violation(const PurityTriple& t, double rel_tol = 1e-12) {
  std::ostringstream os;
  auto slack = [&](double v) { return rel_tol * std::max(1.0, std::abs(v)); };
  if (!(t.mu1 > 0.0 && t.mu1 <= 1.0)) {
    os << "mu1 = " << t.mu1 << " outside (0, 1]";
  } else if (!(t.mu2 > 0.0 && t.mu2 <= 1.0)) {
    os << "mu2 = " << t.mu2 << " outside (0, 1]";
  } else if (const double lo = mu_lower(t.mu1, t.mu2); !(t.mu >= lo - slack(lo))) {
    os << "mu = " << t.mu << " < mu1 mu2 = " << lo;
  } else if (const double hi = mu_upper(t.mu1, t.mu2); !(t.mu <= hi + slack(hi))) {
    os << "mu = " << t.mu << " > mu1 mu2 / (mu1 mu2 + |mu1 - mu2|) = " << hi;
  } else if (const double dlo = delta_lower(t.mu1, t.mu2, t.mu);
             !(t.delta >= dlo - slack(dlo))) {
    os << "Delta = " << t.delta << " below its lower bound " << dlo;
  } else if (const double dhi = delta_upper(t.mu1, t.mu2, t.mu);
             !(t.delta <= dhi + slack(dhi))) {
    os << "Delta = " << t.delta << " above its upper bound " << dhi;
  }
  return os.str();
}

}  // namespace purity_bounds

inline bool is_admissible(const PurityTriple& t) {
  return purity_bounds::violation(t).empty();
}

/// Purities and seralian of a covariance matrix.
inline PurityTriple purity_triple(const CovarianceMatrix& sigma) {
  const SimonInvariants inv = simon_form(sigma);
  return {inv.mu1(), inv.mu2(), inv.mu(), inv.delta()};
}

/// Generator for one sample, derived from (seed, index) alone so streams do
/// not depend on scheduling.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index)
      : engine_(mix(mix(seed) ^ (index + 0x632be59bd9b4e019ULL))) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

/// mu1, mu2 uniform on (0, 1]; mu uniform on its admissible interval; Delta
/// uniform on its admissible interval. Redraws when an interval is empty.
inline PurityTriple sample_invariants(SampleRng& rng) {
  for (;;) {
    PurityTriple t;
    t.mu1 = 1.0 - rng.uniform();
    t.mu2 = 1.0 - rng.uniform();
    t.mu = rng.uniform(purity_bounds::mu_lower(t.mu1, t.mu2),
                       purity_bounds::mu_upper(t.mu1, t.mu2));
    const double lo = purity_bounds::delta_lower(t.mu1, t.mu2, t.mu);
    const double hi = purity_bounds::delta_upper(t.mu1, t.mu2, t.mu);
    if (!(hi >= lo)) continue;
    t.delta = rng.uniform(lo, hi);
    return t;
  }
}

inline constexpr std::string_view kSamplingMeasure =
    "mu1,mu2~U(0,1]; mu~U[mu1*mu2, mu1*mu2/(mu1*mu2+|mu1-mu2|)]; "
    "Delta~U[lower,upper]; joint sign flip of (c+,c-) with p=1/2";

/// Standard-form state with the given purities and seralian:
/// a = 1/mu1, b = 1/mu2, c+- = sqrt(mu1 mu2)/4 (eta_- -+ eta_+) with
/// eta_-+ = sqrt([Delta - (mu1 -+ mu2)^2 / (mu1 mu2)^2]^2 - 4 / mu^2).
/// The sign is fixed so that c+ >= 0.
inline CovarianceMatrix realize_state(const PurityTriple& t) {
  if (const auto why = purity_bounds::violation(t); !why.empty()) {
    throw DomainError("realize_state: invalid purity triple: " + why);
  }
  const double p = t.mu1 * t.mu2;
  const double dm = (t.mu1 - t.mu2) / p;
  const double dp = (t.mu1 + t.mu2) / p;
  const double four_over_mu2 = 4.0 / (t.mu * t.mu);
  auto radical = [&](double shift, const char* name) {
    const double x = t.delta - shift;
    const double r = x * x - four_over_mu2;
    if (r < 0.0) {
      if (r < -1e-12 * std::max(1.0, x * x)) {
        throw DomainError(std::string("realize_state: negative radicand for ") +
                          name + " (" + std::to_string(r) + ")");
      }
      return 0.0;
    }
    return std::sqrt(r);
  };
  const double eta_minus = radical(dm * dm, "eta_-");
  const double eta_plus = radical(dp * dp, "eta_+");
  const double k = std::sqrt(p) / 4.0;
  double c_plus = k * (eta_minus - eta_plus);
  double c_minus = k * (eta_minus + eta_plus);
  if (c_plus < 0.0) {
    c_plus = -c_plus;
    c_minus = -c_minus;
  }
  return from_simon({1.0 / t.mu1, 1.0 / t.mu2, c_plus, c_minus});
}

enum class Region { unphysical, separable, coexistence, entangled };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::unphysical: return "unphysical";
    case Region::separable: return "separable";
    case Region::coexistence: return "coexistence";
    case Region::entangled: return "entangled";
  }
  return "unknown";
}

/// Region of (mu1, mu2, mu) space: separable for
/// mu <= mu1 mu2 / (mu1 + mu2 - mu1 mu2), coexistence up to
/// mu1 mu2 / sqrt(mu1^2 + mu2^2 - mu1^2 mu2^2), entangled beyond.
inline Region classify_region(double mu1, double mu2, double mu) {
  if (!(mu1 > 0.0 && mu1 <= 1.0) || !(mu2 > 0.0 && mu2 <= 1.0)) {
    return Region::unphysical;
  }
  const double p = mu1 * mu2;
  if (mu < purity_bounds::mu_lower(mu1, mu2) || mu > purity_bounds::mu_upper(mu1, mu2)) {
    return Region::unphysical;
  }
  if (mu <= p / (mu1 + mu2 - p)) return Region::separable;
  if (mu <= p / std::sqrt(mu1 * mu1 + mu2 * mu2 - p * p)) return Region::coexistence;
  return Region::entangled;
}

inline Region classify_region(const PurityTriple& t) {
  return classify_region(t.mu1, t.mu2, t.mu);
}

/// Gaussian maximally entangled state at fixed purities: the seralian sits
/// at its lower bound and c+ = -c- = sqrt(1/(mu1 mu2) - 1/mu).
inline CovarianceMatrix gmems(double mu1, double mu2, double mu) {
  const double radicand = 1.0 / (mu1 * mu2) - 1.0 / mu;
  if (radicand < 0.0) {
    if (radicand < -1e-14 / (mu1 * mu2)) {
      throw DomainError("gmems: mu = " + std::to_string(mu) + " < mu1 mu2 = " +
                        std::to_string(mu1 * mu2));
    }
  }
  if (const auto why = purity_bounds::violation(
          {mu1, mu2, mu, purity_bounds::delta_lower(mu1, mu2, mu)});
      !why.empty()) {
    throw DomainError("gmems: " + why);
  }
  const double c = std::sqrt(std::max(0.0, radicand));
  return from_simon({1.0 / mu1, 1.0 / mu2, c, -c});
}

/// GMEMS with local variances (a, b) whose partial transpose has smallest
/// symplectic eigenvalue nu: c^2 = (a - nu)(b - nu). Empty when no physical
/// GMEMS matches.
inline std::optional<CovarianceMatrix> gmems_at_ppt(double a, double b, double nu) {
  if (!(nu > 0.0) || !(a >= 1.0) || !(b >= 1.0) || nu > std::min(a, b)) {
    return std::nullopt;
  }
  const double c2 = (a - nu) * (b - nu);
  const double mu1 = 1.0 / a;
  const double mu2 = 1.0 / b;
  const double mu = 1.0 / (a * b - c2);
  if (!(mu <= purity_bounds::mu_upper(mu1, mu2)) || !(mu <= 1.0)) return std::nullopt;
  const double c = std::sqrt(c2);
  try {
    return from_simon({a, b, c, -c});
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

struct GeneratedState {
  std::uint64_t index = 0;
  PurityTriple triple;
  Region region = Region::unphysical;
  CovarianceMatrix sigma;
};

/// Draws the index-th state of the stream `seed`: invariants, realization and
/// a joint sign flip of (c+, c-) with probability 1/2.
inline GeneratedState generate_state(std::uint64_t seed, std::uint64_t index) {
  SampleRng rng(seed, index);
  GeneratedState g;
  g.index = index;
  g.triple = sample_invariants(rng);
  g.region = classify_region(g.triple);
  g.sigma = realize_state(g.triple);
  if (rng.coin()) {
    Mat4 m = g.sigma.matrix();
    m.block<2, 2>(0, 2) *= -1.0;
    m.block<2, 2>(2, 0) *= -1.0;
    g.sigma = CovarianceMatrix(m);
  }
  return g;
}

struct LowerBoundOptions {
  /// Grid resolution per log-variance axis.
  std::size_t grid_points = 24;
  /// Local variances searched over [1, max_variance].
  double max_variance = 1e3;
  /// Starting points taken from the grid for local refinement.
  std::size_t refine_seeds = 4;
  double refine_tolerance = 1e-10;
  unsigned threads = 1;
};

struct LowerBoundBin {
  double nu_lo = 0.0;
  double nu_hi = 0.0;
  bool present = false;
  double v_squared = std::numeric_limits<double>::quiet_NaN();
  /// Minimizing GMEMS.
  double mu1 = std::numeric_limits<double>::quiet_NaN();
  double mu2 = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  double nu = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct GmemsPoint {
  double u1 = 0.0;  // log a
  double u2 = 0.0;  // log b
  double nu = 0.0;
  double v = std::numeric_limits<double>::infinity();
};

inline double gmems_speed(const InitialSpeedEvaluator& eval, double u1, double u2,
                          double nu) {
  const auto sigma = gmems_at_ppt(std::exp(u1), std::exp(u2), nu);
  if (!sigma) return std::numeric_limits<double>::infinity();
  const double v = eval.speed(*sigma);
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

inline LowerBoundBin minimize_bin(const InitialSpeedEvaluator& eval, double lo,
                                  double hi, const LowerBoundOptions& opt) {
  LowerBoundBin bin;
  bin.nu_lo = lo;
  bin.nu_hi = hi;
  const double umax = std::log(opt.max_variance);
  const std::size_t n = std::max<std::size_t>(opt.grid_points, 2);
  const double du = umax / static_cast<double>(n - 1);
  std::vector<double> nus = {lo};
  if (hi > lo) {
    nus.push_back(0.5 * (lo + hi));
    nus.push_back(hi);
  }

  std::vector<GmemsPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (double nu : nus) {
        GmemsPoint g{du * static_cast<double>(i), du * static_cast<double>(j), nu};
        g.v = gmems_speed(eval, g.u1, g.u2, g.nu);
        if (std::isfinite(g.v)) pts.push_back(g);
      }
    }
  }
  if (pts.empty()) return bin;
  const std::size_t seeds = std::min(opt.refine_seeds, pts.size());
  std::partial_sort(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(seeds),
                    pts.end(), [](const auto& l, const auto& r) { return l.v < r.v; });

  GmemsPoint best = pts.front();
  for (std::size_t s = 0; s < seeds; ++s) {
    // Compass search on (log a, log b, nu), clamped to the box.
    GmemsPoint cur = pts[s];
    std::array<double, 3> step = {du, du, 0.5 * (hi - lo)};
    const std::array<double, 3> lower = {0.0, 0.0, lo};
    const std::array<double, 3> upper = {umax, umax, hi};
    for (int iter = 0; iter < 2000; ++iter) {
      bool improved = false;
      for (int axis = 0; axis < 3; ++axis) {
        if (step[axis] <= 0.0) continue;
        for (double dir : {1.0, -1.0}) {
          std::array<double, 3> x = {cur.u1, cur.u2, cur.nu};
          x[axis] = std::clamp(x[axis] + dir * step[axis], lower[axis], upper[axis]);
          const double v = gmems_speed(eval, x[0], x[1], x[2]);
          if (v < cur.v) {
            cur = {x[0], x[1], x[2], v};
            improved = true;
          }
        }
      }
      if (!improved) {
        for (double& st : step) st *= 0.5;
        if (std::max({step[0], step[1]}) < opt.refine_tolerance) break;
      }
    }
    if (cur.v < best.v) best = cur;
  }
  bin.present = true;
  bin.v_squared = best.v;
  bin.mu1 = std::exp(-best.u1);
  bin.mu2 = std::exp(-best.u2);
  const double a = std::exp(best.u1);
  const double b = std::exp(best.u2);
  bin.mu = 1.0 / (a * b - (a - best.nu) * (b - best.nu));
  bin.nu = best.nu;
  return bin;
}

}  // namespace detail

/// Minimal initial speed over GMEMS whose nu_tilde_minus lies in each bin
/// [edges[i], edges[i+1]]. A single edge, or repeated edges, give point
/// evaluations. Bins with no feasible GMEMS are returned with present = false.
inline std::vector<LowerBoundBin> speed_lower_bound(const std::vector<double>& edges,
                                                    const SystemParams& p,
                                                    double epsilon = kDefaultEpsilon,
                                                    const LowerBoundOptions& opt = {}) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!(edges[i] > 0.0 && edges[i] <= 1.0)) {
      throw DomainError("speed_lower_bound: nu grid must lie in (0, 1]");
    }
    if (i > 0 && edges[i] < edges[i - 1]) {
      throw DomainError("speed_lower_bound: nu grid must be non-decreasing");
    }
  }
  const InitialSpeedEvaluator eval(p, epsilon);
  std::vector<std::pair<double, double>> bins;
  if (edges.size() == 1) {
    bins.emplace_back(edges[0], edges[0]);
  } else {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      bins.emplace_back(edges[i], edges[i + 1]);
    }
  }
  std::vector<LowerBoundBin> out(bins.size());
  parallel_for(
      bins.size(),
      [&](std::size_t i) {
        out[i] = detail::minimize_bin(eval, bins[i].first, bins[i].second, opt);
      },
      opt.threads);
  return out;
}

/// Bin index containing nu (closed on both ends; the lower bin wins ties),
/// or empty when nu lies outside the grid.
inline std::optional<std::size_t> find_bin(const std::vector<LowerBoundBin>& bins,
                                           double nu) {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (nu >= bins[i].nu_lo && nu <= bins[i].nu_hi) return i;
  }
  return std::nullopt;
}

}  // namespace gaussthermo
