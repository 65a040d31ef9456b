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

// Bures line element and Riemannian speed along Gaussian trajectories,
// expressed through the symplectic eigenvalues nu_+ and nu_-.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gaussthermo/dynamics.hpp"
#include "gaussthermo/errors.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/linalg.hpp"

namespace gaussthermo {

/// The metric is undefined within this margin of nu = 1.
inline constexpr double kSingularMetricTolerance = 1e-9;
/// nu_+ and nu_- closer than this are treated as degenerate.
inline constexpr double kDegenerateSpectrumTolerance = 1e-10;
inline constexpr double kDefaultEpsilon = 1e-3;

namespace detail {

inline double metric_weight(double nu, const char* who) {
  if (!(nu > 1.0 + kSingularMetricTolerance)) {
    throw SingularMetricError(std::string(who) +
                              ": symplectic eigenvalue " + std::to_string(nu) +
                              " is at the pure-state limit; metric is singular");
  }
  return 1.0 / (nu * nu - 1.0);
}

inline void require_symmetric(const Mat4& m, const char* who) {
  if (!(m - m.transpose()).isZero(0.0)) {
    throw StructuralError(std::string(who) + ": rate matrix is not symmetric");
  }
}

}  // namespace detail

/// ds_B^2 = 1/4 sum_j (nu_j(t + dt) - nu_j(t))^2 / (nu_j(t)^2 - 1).
inline double bures_increment(const SymplecticSpectrum& now,
                              const SymplecticSpectrum& next) {
  const double wp = detail::metric_weight(now.nu_plus, "bures_increment");
  const double wm = detail::metric_weight(now.nu_minus, "bures_increment");
  const double dp = next.nu_plus - now.nu_plus;
  const double dm = next.nu_minus - now.nu_minus;
  return 0.25 * (dp * dp * wp + dm * dm * wm);
}

struct EigenvalueRates {
  double d_nu_plus = 0.0;
  double d_nu_minus = 0.0;
  /// Set when the spectrum was degenerate and the second-order branch was used.
  bool degenerate = false;
};

/// Time derivatives of nu_+- along d(sigma)/dt = sigma_dot.
///
/// Differentiates nu_pm^2 = [Delta +- sqrt(Delta^2 - 4 det sigma)] / 2 with
/// d(det X) = tr(adj(X) dX) for the 2x2 blocks and
/// d(det sigma) = det(sigma) tr(sigma^-1 sigma_dot). At a degenerate spectrum
/// the discriminant has a double zero, so its square root grows like |s| times
/// sqrt(disc''/2) and the one-sided rates come from the second derivative.
inline EigenvalueRates symplectic_eigenvalue_rates(const CovarianceMatrix& sigma,
                                                   const Mat4& sigma_dot) {
  detail::require_symmetric(sigma_dot, "symplectic_eigenvalue_rates");
  if (sigma_dot.isZero(0.0)) return {};

  const SimonInvariants inv = simon_form(sigma);
  const SymplecticSpectrum nu = symplectic_eigenvalues(inv);

  const Mat2 dot_a = sigma_dot.block<2, 2>(0, 0);
  const Mat2 dot_b = sigma_dot.block<2, 2>(2, 2);
  const Mat2 dot_c = sigma_dot.block<2, 2>(0, 2);
  const double d_delta =
      (linalg::adjugate(sigma.block_a()) * dot_a).trace() +
      (linalg::adjugate(sigma.block_b()) * dot_b).trace() +
      2.0 * (linalg::adjugate(sigma.correlations()) * dot_c).trace();
  const double det = inv.determinant();
  const Mat4 s_rel = sigma.matrix().ldlt().solve(sigma_dot);
  const double d_det = det * s_rel.trace();
  const double delta = inv.delta();

  EigenvalueRates r;
  double d_root = 0.0;
  if (nu.nu_plus - nu.nu_minus <= kDegenerateSpectrumTolerance) {
    const double dd_delta =
        2.0 * (dot_a.determinant() + dot_b.determinant() + 2.0 * dot_c.determinant());
    const double tr = s_rel.trace();
    const double dd_det = det * (tr * tr - (s_rel * s_rel).trace());
    const double dd_disc = 2.0 * d_delta * d_delta + 2.0 * delta * dd_delta - 4.0 * dd_det;
    d_root = std::sqrt(std::max(0.0, 0.5 * dd_disc));
    r.degenerate = true;
  } else {
    const double root = nu.nu_plus * nu.nu_plus - nu.nu_minus * nu.nu_minus;
    d_root = (2.0 * delta * d_delta - 4.0 * d_det) / (2.0 * root);
  }
  r.d_nu_plus = 0.25 * (d_delta + d_root) / nu.nu_plus;
  r.d_nu_minus = 0.25 * (d_delta - d_root) / nu.nu_minus;
  return r;
}

/// v_B^2 = 1/4 sum_j (d nu_j / dt)^2 / (nu_j^2 - 1).
inline double riemannian_speed(const CovarianceMatrix& sigma, const Mat4& sigma_dot) {
  const SymplecticSpectrum nu = symplectic_eigenvalues(sigma);
  const double wp = detail::metric_weight(nu.nu_plus, "riemannian_speed");
  const double wm = detail::metric_weight(nu.nu_minus, "riemannian_speed");
  const EigenvalueRates r = symplectic_eigenvalue_rates(sigma, sigma_dot);
  return 0.25 * (r.d_nu_plus * r.d_nu_plus * wp + r.d_nu_minus * r.d_nu_minus * wm);
}

enum class Mode { a, b };

/// Single-mode analogue built on nu_j = sqrt(det sigma_j) of the local block.
inline double local_speed(const CovarianceMatrix& sigma, const Mat4& sigma_dot,
                          Mode mode) {
  detail::require_symmetric(sigma_dot, "local_speed");
  const int off = mode == Mode::a ? 0 : 2;
  const Mat2 block = sigma.matrix().block<2, 2>(off, off);
  const Mat2 dot = sigma_dot.block<2, 2>(off, off);
  const double det = block.determinant();
  if (!(det > 0.0)) {
    throw DomainError("local_speed: local block is not positive definite");
  }
  const double nu = std::sqrt(det);
  const double w = detail::metric_weight(nu, "local_speed");
  const double d_nu = (linalg::adjugate(block) * dot).trace() / (2.0 * nu);
  return 0.25 * d_nu * d_nu * w;
}

struct SpeedSample {
  double nu_tilde_minus = 1.0;
  /// NaN when excluded.
  double v_squared = std::numeric_limits<double>::quiet_NaN();
  Separability classification = Separability::separable;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double mu = 1.0;
  double delta = 2.0;
  /// The evolved state was still within kSingularMetricTolerance of purity.
  bool excluded = false;
};

/// Speed of evolution a short time epsilon after preparation, for fixed
/// system parameters. e^{A epsilon} is computed once.
class InitialSpeedEvaluator {
 public:
  InitialSpeedEvaluator(const SystemParams& p, double epsilon)
      : prop_(p), epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw DomainError("initial_speed: epsilon must be > 0");
    }
    exp_a_eps_ = linalg::expm(Mat4(prop_.drift().value * epsilon));
  }

  double epsilon() const { return epsilon_; }
  const Propagator& propagator() const { return prop_; }

  /// v_B^2 at epsilon, or NaN when the evolved state is metric-singular.
  double speed(const CovarianceMatrix& sigma0) const {
    const CovarianceMatrix at_eps = prop_.evolve(sigma0, exp_a_eps_);
    try {
      return riemannian_speed(at_eps, prop_.rate(at_eps));
    } catch (const SingularMetricError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }

  SpeedSample operator()(const CovarianceMatrix& sigma0) const {
    SpeedSample s;
    const SimonInvariants inv = simon_form(sigma0);
    s.mu1 = inv.mu1();
    s.mu2 = inv.mu2();
    s.mu = inv.mu();
    s.delta = inv.delta();
    s.nu_tilde_minus = symplectic_eigenvalues(inv.partially_transposed()).nu_minus;
    s.classification = s.nu_tilde_minus < 1.0 - kSeparabilityTolerance
                           ? Separability::entangled
                           : Separability::separable;
    s.v_squared = speed(sigma0);
    s.excluded = std::isnan(s.v_squared);
    return s;
  }

 private:
  Propagator prop_;
  double epsilon_;
  Mat4 exp_a_eps_;
};

inline SpeedSample initial_speed(const CovarianceMatrix& sigma0,
                                 const SystemParams& p,
                                 double epsilon = kDefaultEpsilon) {
  if (const auto report = validate_physical(sigma0); !report) {
    throw DomainError("initial_speed: initial state is unphysical: " +
                      report.diagnostic);
  }
  return InitialSpeedEvaluator(p, epsilon)(sigma0);
}

}  // namespace gaussthermo
