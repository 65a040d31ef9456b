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

// Two-mode Gaussian states described by their 4x4 covariance matrix.
//
// Quadratures are ordered (x_a, p_a, x_b, p_b) and the vacuum has covariance
// equal to the identity, so a thermal mode with occupation M has variance
// 1 + 2M. First moments are not tracked.

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "gaussthermo/errors.hpp"
#include "gaussthermo/linalg.hpp"

namespace gaussthermo {

/// Slack on nu_minus >= 1 when checking the uncertainty principle.
inline constexpr double kPhysicalTolerance = 1e-9;
/// States with nu_tilde_minus >= 1 - kSeparabilityTolerance count as separable.
inline constexpr double kSeparabilityTolerance = 1e-12;

/// Block-diagonal [[0, 1], [-1, 0]] per mode.
inline Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

class CovarianceMatrix {
 public:
  CovarianceMatrix() : m_(Mat4::Identity()) {}

  /// Throws StructuralError unless `m` is finite and exactly symmetric.
  explicit CovarianceMatrix(const Mat4& m) : m_(m) {
    if (!m_.allFinite()) {
      throw StructuralError("covariance matrix has non-finite entries");
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (m_(i, j) != m_(j, i)) {
          std::ostringstream os;
          os << "covariance matrix is not symmetric: entry (" << i << "," << j
             << ") = " << m_(i, j) << " but (" << j << "," << i
             << ") = " << m_(j, i);
          throw StructuralError(os.str());
        }
      }
    }
  }

  /// Symmetrizes `m` first; for results of floating-point matrix products.
  static CovarianceMatrix from_symmetrized(const Mat4& m) {
    return CovarianceMatrix(linalg::symmetrized(m));
  }

  static CovarianceMatrix vacuum() { return CovarianceMatrix(); }

  const Mat4& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Mat2 block_a() const { return m_.block<2, 2>(0, 0); }
  Mat2 block_b() const { return m_.block<2, 2>(2, 2); }
  /// Off-diagonal block <{x_a|p_a}, {x_b|p_b}>.
  Mat2 correlations() const { return m_.block<2, 2>(0, 2); }

  friend bool operator==(const CovarianceMatrix& l, const CovarianceMatrix& r) {
    return l.m_ == r.m_;
  }

 private:
  Mat4 m_;
};

/// Standard-form parameters: sigma = [[a I, diag(c+, c-)], [diag(c+, c-), b I]].
struct SimonInvariants {
  double a = 1.0;
  double b = 1.0;
  double c_plus = 0.0;
  double c_minus = 0.0;

  double mu1() const { return 1.0 / a; }
  double mu2() const { return 1.0 / b; }
  double determinant() const {
    return (a * b - c_plus * c_plus) * (a * b - c_minus * c_minus);
  }
  /// Global purity 1 / sqrt(det sigma).
  double mu() const { return 1.0 / std::sqrt(determinant()); }
  /// Seralian det(alpha) + det(beta) + 2 det(gamma).
  double delta() const { return a * a + b * b + 2.0 * c_plus * c_minus; }

  /// Same invariants after p_b -> -p_b.
  SimonInvariants partially_transposed() const {
    return {a, b, c_plus, -c_minus};
  }
};

struct SymplecticSpectrum {
  double nu_plus = 1.0;
  double nu_minus = 1.0;
};

namespace detail {

// Rotation O and scale such that S = diag(sqrt(a/l1), sqrt(a/l2)) O^T is
// symplectic (det S = 1) and S block S^T = a I.
inline Mat2 local_normalizer(const Mat2& block, double& a_out) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(block);
  const Eigen::Vector2d l = es.eigenvalues();
  if (!(l(0) > 0.0)) {
    throw DomainError("local block is not positive definite (eigenvalue " +
                      std::to_string(l(0)) + ")");
  }
  Mat2 o = es.eigenvectors();
  if (o.determinant() < 0.0) o.col(1) *= -1.0;
  const double a = std::sqrt(l(0) * l(1));
  a_out = a;
  return Eigen::Vector2d(std::sqrt(a / l(0)), std::sqrt(a / l(1))).asDiagonal() *
         o.transpose();
}

inline bool is_standard_form(const Mat4& m) {
  return m(0, 1) == 0.0 && m(2, 3) == 0.0 && m(0, 0) == m(1, 1) &&
         m(2, 2) == m(3, 3) && m(0, 3) == 0.0 && m(1, 2) == 0.0;
}

inline SymplecticSpectrum spectrum_from(double a, double b, double cp,
                                        double cm) {
  const double delta = a * a + b * b + 2.0 * cp * cm;
  const double det = (a * b - cp * cp) * (a * b - cm * cm);
  if (!(det > 0.0)) {
    throw DomainError("covariance matrix is not positive definite (det = " +
                      std::to_string(det) + ")");
  }
  // Delta^2 - 4 det, expanded so that it vanishes exactly for degenerate
  // standard forms such as a = b, c- = -c+.
  const double ab2 = a * a - b * b;
  double disc = ab2 * ab2 + 4.0 * (a * cp + b * cm) * (b * cp + a * cm);
  if (disc < 0.0) {
    if (disc < -1e-10 * delta * delta) {
      throw NumericalError("symplectic eigenvalues: Delta^2 - 4 det = " +
                           std::to_string(disc) + " is negative");
    }
    disc = 0.0;
  }
  const double nu_plus_sq = 0.5 * (delta + std::sqrt(disc));
  return {std::sqrt(nu_plus_sq), std::sqrt(det / nu_plus_sq)};
}

}  // namespace detail

/// Reduces sigma to standard form by local symplectic transformations.
///
/// The returned c+ is the larger singular value of the normalized
/// correlation block and carries a non-negative sign; the sign of c- equals
/// the sign of det(gamma). Matrices that are already in standard form are
/// read off unchanged.
inline SimonInvariants simon_form(const CovarianceMatrix& sigma) {
  const Mat4& m = sigma.matrix();
  if (detail::is_standard_form(m)) {
    return {m(0, 0), m(2, 2), m(0, 2), m(1, 3)};
  }
  SimonInvariants inv;
  const Mat2 sa = detail::local_normalizer(sigma.block_a(), inv.a);
  const Mat2 sb = detail::local_normalizer(sigma.block_b(), inv.b);
  const Mat2 gamma = sa * sigma.correlations() * sb.transpose();
  Eigen::JacobiSVD<Mat2> svd(gamma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector2d s = svd.singularValues();
  if (svd.matrixU().determinant() < 0.0) s(1) = -s(1);
  if (svd.matrixV().determinant() < 0.0) s(1) = -s(1);
  inv.c_plus = s(0);
  inv.c_minus = s(1);
  return inv;
}

/// Builds the standard-form covariance matrix.
///
/// Throws DomainError naming the violated inequality when the parameters do
/// not describe a physical state (a, b >= 1, det sigma >= 1 and the
/// Robertson-Schroedinger condition Delta <= 1 + det sigma).
inline CovarianceMatrix from_simon(const SimonInvariants& inv) {
  const double tol = kPhysicalTolerance;
  std::ostringstream why;
  if (!(inv.a >= 1.0 - tol)) {
    why << "a = " << inv.a << " < 1";
  } else if (!(inv.b >= 1.0 - tol)) {
    why << "b = " << inv.b << " < 1";
  } else if (!(inv.a * inv.b - inv.c_plus * inv.c_plus > 0.0) ||
             !(inv.a * inv.b - inv.c_minus * inv.c_minus > 0.0)) {
    why << "ab - c^2 <= 0 (not positive definite)";
  } else {
    const auto spec = detail::spectrum_from(inv.a, inv.b, inv.c_plus, inv.c_minus);
    if (!(spec.nu_minus >= 1.0 - tol)) {
      why << "det sigma = " << inv.determinant() << ", Delta = " << inv.delta()
          << ": nu_minus = " << spec.nu_minus << " < 1";
      if (inv.determinant() < 1.0) {
        why << " (det sigma < 1)";
      } else {
        why << " (Delta > 1 + det sigma)";
      }
    }
  }
  if (!why.str().empty()) {
    throw DomainError("from_simon: unphysical parameters: " + why.str());
  }
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = inv.a;
  m(2, 2) = m(3, 3) = inv.b;
  m(0, 2) = m(2, 0) = inv.c_plus;
  m(1, 3) = m(3, 1) = inv.c_minus;
  return CovarianceMatrix(m);
}

/// Seralian det(alpha) + det(beta) + 2 det(gamma), evaluated on the raw blocks.
inline double seralian(const CovarianceMatrix& sigma) {
  return sigma.block_a().determinant() + sigma.block_b().determinant() +
         2.0 * sigma.correlations().determinant();
}

/// nu_pm^2 = [Delta +- sqrt(Delta^2 - 4 det sigma)] / 2, evaluated on the
/// standard form for accuracy near degenerate spectra.
inline SymplecticSpectrum symplectic_eigenvalues(const SimonInvariants& inv) {
  return detail::spectrum_from(inv.a, inv.b, inv.c_plus, inv.c_minus);
}

inline SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  return symplectic_eigenvalues(simon_form(sigma));
}

/// Momentum flip on mode b.
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma) {
  const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  return CovarianceMatrix(flip.asDiagonal() * sigma.matrix() * flip.asDiagonal());
}

/// Smaller symplectic eigenvalue of the partially transposed state, from
/// Delta~ = Delta - 4 det(gamma).
inline double ppt_min_eigenvalue(const CovarianceMatrix& sigma) {
  return symplectic_eigenvalues(simon_form(sigma).partially_transposed()).nu_minus;
}

inline double purity(const CovarianceMatrix& sigma) {
  return simon_form(sigma).mu();
}

struct PhysicalityReport {
  bool physical = false;
  double nu_minus = 0.0;
  double min_eigenvalue = 0.0;
  std::string diagnostic;

  explicit operator bool() const { return physical; }
};

/// Checks positive definiteness and the uncertainty principle
/// sigma + i Omega >= 0, i.e. nu_minus >= 1 - kPhysicalTolerance.
inline PhysicalityReport validate_physical(const CovarianceMatrix& sigma,
                                           double tol = kPhysicalTolerance) {
  PhysicalityReport report;
  Eigen::SelfAdjointEigenSolver<Mat4> es(sigma.matrix(), Eigen::EigenvaluesOnly);
  report.min_eigenvalue = es.eigenvalues()(0);
  if (!(report.min_eigenvalue > 0.0)) {
    report.diagnostic = "not positive definite: smallest eigenvalue " +
                        std::to_string(report.min_eigenvalue);
    return report;
  }
  report.nu_minus = symplectic_eigenvalues(sigma).nu_minus;
  if (!(report.nu_minus >= 1.0 - tol)) {
    report.diagnostic = "uncertainty principle violated: nu_minus = " +
                        std::to_string(report.nu_minus) + " < 1";
    return report;
  }
  report.physical = true;
  return report;
}

/// (1 + 2 M_a) I_2 (+) (1 + 2 M_b) I_2.
inline CovarianceMatrix thermal_state(double m_a, double m_b) {
  if (!(m_a >= 0.0) || !(m_b >= 0.0)) {
    throw DomainError("thermal_state: occupations must be non-negative (got " +
                      std::to_string(m_a) + ", " + std::to_string(m_b) + ")");
  }
  const Eigen::Vector4d d(1.0 + 2.0 * m_a, 1.0 + 2.0 * m_a, 1.0 + 2.0 * m_b,
                          1.0 + 2.0 * m_b);
  return CovarianceMatrix(Mat4(d.asDiagonal()));
}

/// Applies S = diag(e^{r_a}, e^{-r_a}) (+) diag(e^{r_b}, e^{-r_b}) as S sigma S^T.
inline CovarianceMatrix local_squeeze(const CovarianceMatrix& sigma, double r_a,
                                      double r_b) {
  if (!std::isfinite(r_a) || !std::isfinite(r_b)) {
    throw DomainError("local_squeeze: squeezing parameters must be finite");
  }
  const Eigen::Vector4d s(std::exp(r_a), std::exp(-r_a), std::exp(r_b),
                          std::exp(-r_b));
  return CovarianceMatrix::from_symmetrized(s.asDiagonal() * sigma.matrix() *
                                            s.asDiagonal());
}

/// Per-mode phase-space rotation by angles theta_a, theta_b.
inline CovarianceMatrix local_rotation(const CovarianceMatrix& sigma,
                                       double theta_a, double theta_b) {
  Mat4 r = Mat4::Zero();
  r.block<2, 2>(0, 0) = Eigen::Rotation2Dd(theta_a).toRotationMatrix();
  r.block<2, 2>(2, 2) = Eigen::Rotation2Dd(theta_b).toRotationMatrix();
  return CovarianceMatrix::from_symmetrized(r * sigma.matrix() * r.transpose());
}

/// Two-mode squeezed vacuum: a = b = cosh 2r, c+ = -c- = sinh 2r.
inline CovarianceMatrix twin_beam(double r) {
  if (!std::isfinite(r)) throw DomainError("twin_beam: r must be finite");
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = c;
  m(0, 2) = m(2, 0) = s;
  m(1, 3) = m(3, 1) = -s;
  return CovarianceMatrix(m);
}

enum class Separability { entangled, separable };

inline std::string_view to_string(Separability s) {
  return s == Separability::entangled ? "entangled" : "separable";
}

/// PPT criterion; boundary states (nu_tilde_minus = 1) are separable.
inline Separability classify_separability(const CovarianceMatrix& sigma) {
  return ppt_min_eigenvalue(sigma) < 1.0 - kSeparabilityTolerance
             ? Separability::entangled
             : Separability::separable;
}

}  // namespace gaussthermo
