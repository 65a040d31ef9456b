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

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "gaussthermo/errors.hpp"

namespace gaussthermo {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

namespace linalg {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
auto symmetrized(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  return Plain(0.5 * (m + m.transpose()));
}

/// Adjugate of a 2x2 matrix, so that d(det X) = tr(adj(X) dX).
inline Mat2 adjugate(const Mat2& m) {
  Mat2 r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r;
}

namespace detail {

// Higham (2005) Pade coefficients and the 1-norm bounds below which each
// degree is accurate to unit roundoff.
inline constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                                 420.0,   30.0,    1.0};
inline constexpr std::array<double, 8> kPade7 = {
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
inline constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
inline constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
inline constexpr double kTheta3 = 1.495585217958292e-2;
inline constexpr double kTheta5 = 2.539398330063230e-1;
inline constexpr double kTheta7 = 9.504178996162932e-1;
inline constexpr double kTheta9 = 2.097847961257068e0;
inline constexpr double kTheta13 = 5.371920351148152e0;

template <typename M, std::size_t N>
M pade_low_degree(const M& a, const std::array<double, N>& b) {
  const M ident = M::Identity();
  const M a2 = a * a;
  M power = ident;  // a^(2j)
  M u_inner = M::Zero();
  M v = M::Zero();
  for (std::size_t j = 0; 2 * j < N; ++j) {
    v += b[2 * j] * power;
    if (2 * j + 1 < N) u_inner += b[2 * j + 1] * power;
    power = power * a2;
  }
  const M u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

template <typename M>
M pade13(const M& a) {
  const auto& b = kPade13;
  const M ident = M::Identity();
  const M a2 = a * a;
  const M a4 = a2 * a2;
  const M a6 = a4 * a2;
  const M u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                   b[5] * a4 + b[3] * a2 + b[1] * ident);
  const M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
              b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with a diagonal Pade kernel.
///
/// Degree selection follows the 1-norm thresholds of Higham's algorithm, so
/// the result is accurate to a small multiple of unit roundoff relative to
/// ||exp(a)|| for well-conditioned inputs.
template <typename M>
M expm(const M& a) {
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) {
    throw NumericalError("expm: non-finite matrix entries");
  }
  if (norm1 <= detail::kTheta3) return detail::pade_low_degree(a, detail::kPade3);
  if (norm1 <= detail::kTheta5) return detail::pade_low_degree(a, detail::kPade5);
  if (norm1 <= detail::kTheta7) return detail::pade_low_degree(a, detail::kPade7);
  if (norm1 <= detail::kTheta9) return detail::pade_low_degree(a, detail::kPade9);

  int squarings = 0;
  if (norm1 > detail::kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / detail::kTheta13)));
  }
  M r = detail::pade13(M(a / std::ldexp(1.0, squarings)));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

/// Principal square root of a real 4x4 matrix through its (complex)
/// eigendecomposition. The input is generally non-symmetric.
///
/// Throws NumericalError when an eigenvalue lies on the negative real axis
/// or when the reconstructed root fails ||R^2 - X||_max <= tol * max(1, ||X||_max).
inline Mat4 sqrtm(const Mat4& x, double tol = 1e-9) {
  Eigen::EigenSolver<Mat4> es(x);
  if (es.info() != Eigen::Success) {
    throw NumericalError("sqrtm: eigendecomposition did not converge");
  }
  const Eigen::Vector4cd lambda = es.eigenvalues();
  const Eigen::Matrix4cd vecs = es.eigenvectors();
  const double scale = std::max(1.0, max_abs(x));
  Eigen::Vector4cd root;
  for (int i = 0; i < 4; ++i) {
    const auto l = lambda(i);
    if (l.real() < -tol * scale && std::abs(l.imag()) <= tol * scale) {
      throw NumericalError("sqrtm: eigenvalue " + std::to_string(l.real()) +
                           " on the negative real axis");
    }
    root(i) = std::sqrt(l);
  }
  const Eigen::Matrix4cd r =
      vecs * root.asDiagonal() * vecs.partialPivLu().inverse();
  const Mat4 real_root = r.real();
  const double residual = max_abs(Mat4(real_root * real_root - x));
  if (!(residual <= tol * scale)) {
    throw NumericalError("sqrtm: residual " + std::to_string(residual) +
                         " exceeds tolerance (eigenvalues: " +
                         std::to_string(lambda(0).real()) + ", " +
                         std::to_string(lambda(1).real()) + ", " +
                         std::to_string(lambda(2).real()) + ", " +
                         std::to_string(lambda(3).real()) + ")");
  }
  return real_root;
}

}  // namespace linalg
}  // namespace gaussthermo
