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

// Linear quadrature dynamics of the two coupled modes and the Lyapunov
// equation d(sigma)/dt = A sigma + sigma A^T + D.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussthermo/errors.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/linalg.hpp"

namespace gaussthermo {

/// Stability requires every drift eigenvalue to have real part below -kStabilityTolerance.
inline constexpr double kStabilityTolerance = 1e-12;

struct SystemParams {
  double omega_a = 1.0;
  double omega_b = 1.0;
  double gn = 0.0;  // effective coupling G*N
  double k_a = 0.1;
  double k_b = 0.1;
  double m_a = 0.0;  // bath occupations
  double m_b = 0.0;

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw DomainError(std::string("SystemParams: ") + what);
    };
    require(omega_a > 0.0 && std::isfinite(omega_a), "omega_a must be > 0");
    require(omega_b > 0.0 && std::isfinite(omega_b), "omega_b must be > 0");
    require(k_a > 0.0 && std::isfinite(k_a), "k_a must be > 0");
    require(k_b > 0.0 && std::isfinite(k_b), "k_b must be > 0");
    require(m_a >= 0.0 && std::isfinite(m_a), "m_a must be >= 0");
    require(m_b >= 0.0 && std::isfinite(m_b), "m_b must be >= 0");
    require(gn >= 0.0 && std::isfinite(gn), "gn must be >= 0");
  }
};

struct DriftMatrix {
  Mat4 value;
};

struct DiffusionMatrix {
  Mat4 value;
};

/// Drift of (x_a, p_a, x_b, p_b): damped rotations coupled through x_b -> p_a
/// and x_a -> p_b with strength GN.
inline DriftMatrix build_drift(const SystemParams& p) {
  p.validate();
  Mat4 a;
  // clang-format off
  a << -p.k_a,  p.omega_a,  0.0,     0.0,
       -p.omega_a, -p.k_a, -p.gn,    0.0,
        0.0,     0.0,      -p.k_b,   p.omega_b,
       -p.gn,    0.0,      -p.omega_b, -p.k_b;
  // clang-format on
  return {a};
}

/// diag(2 k_a (2 M_a + 1) I_2, 2 k_b (2 M_b + 1) I_2).
inline DiffusionMatrix build_diffusion(const SystemParams& p) {
  p.validate();
  const double da = 2.0 * p.k_a * (2.0 * p.m_a + 1.0);
  const double db = 2.0 * p.k_b * (2.0 * p.m_b + 1.0);
  return {Mat4(Eigen::Vector4d(da, da, db, db).asDiagonal())};
}

/// Largest real part over the drift spectrum.
inline double spectral_abscissa(const DriftMatrix& a) {
  Eigen::EigenSolver<Mat4> es(a.value, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_abscissa: eigenvalue solver failed");
  }
  return es.eigenvalues().real().maxCoeff();
}

/// Eigenvalue form of the Routh-Hurwitz test.
inline bool is_stable(const DriftMatrix& a) {
  return spectral_abscissa(a) < -kStabilityTolerance;
}

namespace detail {

inline void require_stable(const DriftMatrix& a, const char* who) {
  const double abscissa = spectral_abscissa(a);
  if (!(abscissa < -kStabilityTolerance)) {
    throw PreconditionError(std::string(who) +
                            ": drift matrix is not stable (max Re lambda = " +
                            std::to_string(abscissa) + ")");
  }
}

}  // namespace detail

/// Residual max|A sigma + sigma A^T + D|.
inline double lyapunov_residual(const DriftMatrix& a, const DiffusionMatrix& d,
                                const Mat4& sigma) {
  return linalg::max_abs(
      Mat4(a.value * sigma + sigma * a.value.transpose() + d.value));
}

/// Stationary covariance solving A sigma + sigma A^T = -D.
///
/// Solved as the 16x16 system (I (x) A + A (x) I) vec(sigma) = -vec(D) and
/// symmetrized afterwards.
inline CovarianceMatrix solve_steady(const DriftMatrix& a,
                                     const DiffusionMatrix& d) {
  detail::require_stable(a, "solve_steady");
  using Mat16 = Eigen::Matrix<double, 16, 16>;
  using Vec16 = Eigen::Matrix<double, 16, 1>;
  Mat16 k = Mat16::Zero();
  const Mat4 id = Mat4::Identity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      k.block<4, 4>(4 * i, 4 * j) += id(i, j) * a.value + a.value(i, j) * id;
    }
  }
  const Vec16 rhs = -Eigen::Map<const Vec16>(d.value.data());
  Eigen::FullPivLU<Mat16> lu(k);
  if (!lu.isInvertible()) {
    throw NumericalError("solve_steady: Lyapunov operator is singular");
  }
  const Vec16 x = lu.solve(rhs);
  const Mat4 sigma = Eigen::Map<const Mat4>(x.data());
  return CovarianceMatrix::from_symmetrized(sigma);
}

/// Exact evolution sigma(t) = e^{At} (sigma0 - sigma_s) e^{A^T t} + sigma_s for
/// fixed (A, D). Caches the steady state.
class Propagator {
 public:
  Propagator(const DriftMatrix& a, const DiffusionMatrix& d)
      : a_(a), d_(d), steady_(solve_steady(a, d)) {}

  explicit Propagator(const SystemParams& p)
      : Propagator(build_drift(p), build_diffusion(p)) {}

  const DriftMatrix& drift() const { return a_; }
  const DiffusionMatrix& diffusion() const { return d_; }
  const CovarianceMatrix& steady_state() const { return steady_; }

  CovarianceMatrix operator()(const CovarianceMatrix& sigma0, double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw DomainError("propagate: time must be finite and >= 0 (got " +
                        std::to_string(t) + ")");
    }
    if (t == 0.0) return sigma0;
    return evolve(sigma0, linalg::expm(Mat4(a_.value * t)));
  }

  /// Same as operator() with a precomputed e^{At}.
  CovarianceMatrix evolve(const CovarianceMatrix& sigma0,
                          const Mat4& exp_at) const {
    const Mat4& s = steady_.matrix();
    return CovarianceMatrix::from_symmetrized(
        exp_at * (sigma0.matrix() - s) * exp_at.transpose() + s);
  }

  /// Right-hand side of the Lyapunov equation at sigma.
  Mat4 rate(const CovarianceMatrix& sigma) const {
    const Mat4& m = sigma.matrix();
    return linalg::symmetrized(Mat4(a_.value * m + m * a_.value.transpose() + d_.value));
  }

 private:
  DriftMatrix a_;
  DiffusionMatrix d_;
  CovarianceMatrix steady_;
};

inline CovarianceMatrix propagate(const CovarianceMatrix& sigma0,
                                  const DriftMatrix& a, const DiffusionMatrix& d,
                                  double t) {
  return Propagator(a, d)(sigma0, t);
}

enum class GridSpacing { linear, log };

/// Time grid starting at 0. A log grid places the remaining n - 1 points
/// geometrically between t_max * 1e-4 and t_max.
inline std::vector<double> make_time_grid(double t_max, std::size_t n_points,
                                          GridSpacing spacing = GridSpacing::linear) {
  if (n_points == 0) throw DomainError("time grid: n_points must be >= 1");
  if (n_points == 1) return {0.0};
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("time grid: t_max must be > 0");
  }
  std::vector<double> grid(n_points, 0.0);
  const double last = static_cast<double>(n_points - 1);
  if (spacing == GridSpacing::linear) {
    for (std::size_t i = 1; i < n_points; ++i) {
      grid[i] = t_max * static_cast<double>(i) / last;
    }
  } else {
    const double lo = std::log(t_max * 1e-4);
    const double hi = std::log(t_max);
    for (std::size_t i = 1; i < n_points; ++i) {
      const double f = n_points == 2 ? 1.0 : static_cast<double>(i - 1) / (last - 1.0);
      grid[i] = std::exp(lo + f * (hi - lo));
    }
    grid.back() = t_max;
  }
  return grid;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<CovarianceMatrix> states;

  std::size_t size() const { return times.size(); }
};

/// Evaluates the exact solution on each grid point independently.
inline Trajectory trajectory(const CovarianceMatrix& sigma0, const SystemParams& p,
                             const std::vector<double>& grid) {
  if (grid.empty() || grid.front() != 0.0) {
    throw DomainError("trajectory: grid must start at t = 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError("trajectory: grid must be strictly increasing");
    }
  }
  const Propagator prop(p);
  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  for (double t : grid) {
    auto sigma = prop(sigma0, t);
    if (const auto report = validate_physical(sigma); !report) {
      throw NumericalError("trajectory: unphysical state at t = " +
                           std::to_string(t) + ": " + report.diagnostic);
    }
    traj.states.push_back(std::move(sigma));
  }
  return traj;
}

}  // namespace gaussthermo
