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

// Uhlmann fidelity between zero-mean Gaussian states and the quantum Fisher
// information of the bath occupation number.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gaussthermo/dynamics.hpp"
#include "gaussthermo/errors.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/linalg.hpp"

namespace gaussthermo {

inline constexpr double kDefaultOccupationStep = 1e-3;
/// Below this step 1 - F is at the rounding level of F itself.
inline constexpr double kMinOccupationStep = 1e-6;

/// Root fidelity F = Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) of two zero-mean
/// Gaussian states:
///
///   F^4 = det[2 (sqrt(I + (Xi Omega)^-2 / 4) + I) Xi] / det[(sigma1 + sigma2) / 2]
///   2 Omega Xi = (sigma1 + sigma2)^-1 (Omega + sigma2 Omega sigma1)
inline double uhlmann_fidelity(const CovarianceMatrix& sigma1,
                               const CovarianceMatrix& sigma2) {
  for (const auto* s : {&sigma1, &sigma2}) {
    if (const auto report = validate_physical(*s); !report) {
      throw DomainError("uhlmann_fidelity: unphysical input: " + report.diagnostic);
    }
  }
  if (sigma1 == sigma2) return 1.0;

  const Mat4 omega = symplectic_form();
  const Mat4 id = Mat4::Identity();
  const Mat4 sum = sigma1.matrix() + sigma2.matrix();
  const Mat4 x = sum.partialPivLu().solve(
      Mat4(omega + sigma2.matrix() * omega * sigma1.matrix()));
  // Omega^-1 = -Omega.
  const Mat4 xi = -0.5 * omega * x;
  const Mat4 inv_xi_omega = Mat4(xi * omega).partialPivLu().inverse();
  const Mat4 root = linalg::sqrtm(Mat4(id + 0.25 * inv_xi_omega * inv_xi_omega));
  const double numerator = Mat4(2.0 * (root + id) * xi).determinant();
  const double denominator = Mat4(0.5 * sum).determinant();
  const double f4 = numerator / denominator;
  if (!(f4 > 0.0) || !std::isfinite(f4)) {
    throw NumericalError("uhlmann_fidelity: F^4 = " + std::to_string(f4) +
                         " is not positive");
  }
  return std::min(1.0, std::pow(f4, 0.25));
}

/// Bose-Einstein occupation 1 / (e^{omega/T} - 1).
inline double occupation(double omega, double temperature) {
  if (!(temperature > 0.0)) {
    throw DomainError("occupation: temperature must be > 0 (got " +
                      std::to_string(temperature) + ")");
  }
  if (!(omega > 0.0)) throw DomainError("occupation: omega must be > 0");
  return 1.0 / std::expm1(omega / temperature);
}

/// Inverse of occupation() in T.
inline double temperature_from_occupation(double omega, double m) {
  if (!(m > 0.0)) {
    throw DomainError("temperature_from_occupation: occupation must be > 0");
  }
  return omega / std::log1p(1.0 / m);
}

/// dM/dT = omega / (4 T^2 sinh^2(omega / 2T)).
inline double occupation_derivative(double omega, double temperature) {
  if (!(temperature > 0.0)) {
    throw DomainError("occupation_derivative: temperature must be > 0");
  }
  const double s = std::sinh(omega / (2.0 * temperature));
  return omega / (4.0 * temperature * temperature * s * s);
}

/// Q_T = Q_M omega^2 csch^4(omega / 2T) / (16 T^4).
inline double qfi_temperature(double q_m, double omega, double temperature) {
  if (!(temperature > 0.0)) {
    throw DomainError("qfi_temperature: temperature must be > 0 (got " +
                      std::to_string(temperature) + ")");
  }
  const double csch = 1.0 / std::sinh(omega / (2.0 * temperature));
  const double t2 = temperature * temperature;
  return q_m * omega * omega * std::pow(csch, 4) / (16.0 * t2 * t2);
}

/// Which bath occupations move with the estimated parameter M.
enum class BathShift { both, a, b };

/// Q_M(t) = 8 (1 - F(rho_{M - dM/2}(t), rho_{M + dM/2}(t))) / dM^2 for one
/// parameter point; holds both propagators so scans reuse them.
class QfiEvaluator {
 public:
  QfiEvaluator(const SystemParams& p, double dm = kDefaultOccupationStep,
               BathShift shift = BathShift::both)
      : params_(p), dm_(dm), lower_(shifted(p, -0.5 * dm, dm, shift)),
        upper_(shifted(p, 0.5 * dm, dm, shift)) {}

  double step() const { return dm_; }
  const SystemParams& params() const { return params_; }

  double operator()(const CovarianceMatrix& sigma0, double t) const {
    if (t == 0.0) return 0.0;
    const CovarianceMatrix lo = lower_(sigma0, t);
    const CovarianceMatrix hi = upper_(sigma0, t);
    const double f = uhlmann_fidelity(lo, hi);
    return std::max(0.0, 8.0 * (1.0 - f) / (dm_ * dm_));
  }

 private:
  static Propagator shifted(SystemParams p, double delta, double dm, BathShift shift) {
    if (!(dm >= kMinOccupationStep) || !std::isfinite(dm)) {
      throw StepSizeError("qfi_occupation: dM = " + std::to_string(dm) +
                          " is below " + std::to_string(kMinOccupationStep) +
                          "; 1 - F would underflow, use a larger dM");
    }
    if (shift != BathShift::b) p.m_a += delta;
    if (shift != BathShift::a) p.m_b += delta;
    if (p.m_a < 0.0 || p.m_b < 0.0) {
      throw DomainError("qfi_occupation: M - dM/2 is negative; reduce dM");
    }
    return Propagator(p);
  }

  SystemParams params_;
  double dm_;
  Propagator lower_;
  Propagator upper_;
};

inline double qfi_occupation(const CovarianceMatrix& sigma0, const SystemParams& p,
                             double t, double dm = kDefaultOccupationStep,
                             BathShift shift = BathShift::both) {
  return QfiEvaluator(p, dm, shift)(sigma0, t);
}

struct QfiPoint {
  double t = 0.0;
  double q_m = 0.0;
  double q_t = 0.0;
};

/// One QfiPoint per grid time. Q_T uses omega_a and the temperature whose
/// occupation equals M_a; it is NaN when M_a = 0.
inline std::vector<QfiPoint> qfi_scan(const CovarianceMatrix& sigma0,
                                      const SystemParams& p,
                                      const std::vector<double>& grid,
                                      double dm = kDefaultOccupationStep,
                                      BathShift shift = BathShift::both) {
  const QfiEvaluator qfi(p, dm, shift);
  const double temperature =
      p.m_a > 0.0 ? temperature_from_occupation(p.omega_a, p.m_a) : 0.0;
  std::vector<QfiPoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    QfiPoint pt;
    pt.t = t;
    pt.q_m = qfi(sigma0, t);
    pt.q_t = temperature > 0.0 ? qfi_temperature(pt.q_m, p.omega_a, temperature)
                               : std::numeric_limits<double>::quiet_NaN();
    out.push_back(pt);
  }
  return out;
}

}  // namespace gaussthermo
