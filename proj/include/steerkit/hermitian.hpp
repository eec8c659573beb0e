// Copyright 2026 The steerkit Authors
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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "steerkit/error.hpp"

namespace steerkit {

/// Dense complex Hermitian matrix. Hermiticity is exact: construction from a
/// general matrix checks it within a tolerance and then symmetrizes.
template <typename Real>
class BasicHermitian {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicHermitian() : m_(Matrix::Zero(1, 1)) {}
  explicit BasicHermitian(Eigen::Index dim) : m_(Matrix::Zero(dim, dim)) {
    if (dim < 1) throw DimensionError("Hermitian operator dimension must be >= 1");
  }

  template <typename Derived>
  static BasicHermitian from_matrix(const Eigen::MatrixBase<Derived>& m, Real tol = Real(1e-10)) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw DimensionError("Hermitian operator must be square and non-empty");
    }
    Matrix full = m.template cast<Scalar>();
    const Real scale = std::max(Real(1), full.cwiseAbs().maxCoeff());
    if ((full - full.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
      throw InvalidInput("matrix is not Hermitian");
    }
    BasicHermitian h;
    h.m_ = (full + full.adjoint()) / Real(2);
    return h;
  }

  static BasicHermitian zero(Eigen::Index dim) { return BasicHermitian(dim); }
  static BasicHermitian identity(Eigen::Index dim) {
    BasicHermitian h(dim);
    h.m_.setIdentity();
    return h;
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  Real trace() const { return m_.diagonal().real().sum(); }

  BasicHermitian& operator+=(const BasicHermitian& o) {
    check_same_dim(o);
    m_ += o.m_;
    return *this;
  }
  BasicHermitian& operator-=(const BasicHermitian& o) {
    check_same_dim(o);
    m_ -= o.m_;
    return *this;
  }
  BasicHermitian& operator*=(Real s) {
    m_ *= s;
    return *this;
  }
  BasicHermitian& operator/=(Real s) {
    m_ /= s;
    return *this;
  }

  friend BasicHermitian operator+(BasicHermitian a, const BasicHermitian& b) { return a += b; }
  friend BasicHermitian operator-(BasicHermitian a, const BasicHermitian& b) { return a -= b; }
  friend BasicHermitian operator-(BasicHermitian a) {
    a.m_ = -a.m_;
    return a;
  }
  friend BasicHermitian operator*(BasicHermitian a, Real s) { return a *= s; }
  friend BasicHermitian operator*(Real s, BasicHermitian a) { return a *= s; }
  friend BasicHermitian operator/(BasicHermitian a, Real s) { return a /= s; }

  /// U * this * U^dagger.
  template <typename Derived>
  BasicHermitian conjugated(const Eigen::MatrixBase<Derived>& u) const {
    if (u.cols() != dim()) throw DimensionError("conjugation by a matrix of the wrong size");
    BasicHermitian h;
    const Matrix t = u * m_ * u.adjoint();
    h.m_ = (t + t.adjoint()) / Real(2);
    return h;
  }

 private:
  void check_same_dim(const BasicHermitian& o) const {
    if (o.dim() != dim()) throw DimensionError("Hermitian operator dimension mismatch");
  }

  Matrix m_;
};

using HermitianOperator = BasicHermitian<double>;

/// Real trace inner product Tr[a b].
template <typename Real>
Real trace_product(const BasicHermitian<Real>& a, const BasicHermitian<Real>& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace product of operators of different dimension");
  // Tr[ab] = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij)
  return (a.matrix().array() * b.matrix().array().conjugate()).real().sum();
}

template <typename Real>
Real max_abs_difference(const BasicHermitian<Real>& a, const BasicHermitian<Real>& b) {
  if (a.dim() != b.dim()) throw DimensionError("comparing operators of different dimension");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

namespace pauli {

template <typename Real = double>
BasicHermitian<Real> I() {
  return BasicHermitian<Real>::identity(2);
}

template <typename Real = double>
BasicHermitian<Real> X() {
  typename BasicHermitian<Real>::Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return BasicHermitian<Real>::from_matrix(m);
}

template <typename Real = double>
BasicHermitian<Real> Y() {
  using C = std::complex<Real>;
  typename BasicHermitian<Real>::Matrix m(2, 2);
  m << C(0), C(0, -1), C(0, 1), C(0);
  return BasicHermitian<Real>::from_matrix(m);
}

template <typename Real = double>
BasicHermitian<Real> Z() {
  typename BasicHermitian<Real>::Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return BasicHermitian<Real>::from_matrix(m);
}

}  // namespace pauli

template <typename Real>
struct PauliCoefficients {
  Real identity = 0;
  Real x = 0;
  Real y = 0;
  Real z = 0;
};

/// Coefficients of m = c_I I + c_X X + c_Y Y + c_Z Z. Qubit operators only.
template <typename Real>
PauliCoefficients<Real> pauli_decompose(const BasicHermitian<Real>& m) {
  if (m.dim() != 2) throw DimensionError("pauli_decompose requires a 2x2 operator");
  const auto& a = m.matrix();
  PauliCoefficients<Real> c;
  c.identity = (a(0, 0).real() + a(1, 1).real()) / 2;
  c.z = (a(0, 0).real() - a(1, 1).real()) / 2;
  c.x = a(1, 0).real();
  c.y = a(1, 0).imag();
  return c;
}

template <typename Real>
BasicHermitian<Real> pauli_compose(const PauliCoefficients<Real>& c) {
  return c.identity * pauli::I<Real>() + c.x * pauli::X<Real>() + c.y * pauli::Y<Real>() +
         c.z * pauli::Z<Real>();
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sweeping until the off-diagonal Frobenius norm is below `tol` relative
/// to the full norm. Returned in ascending order.
template <typename Real>
std::vector<Real> jacobi_eigenvalues(const BasicHermitian<Real>& m, Real tol = Real(1e-12),
                                     int max_sweeps = 100) {
  using Scalar = std::complex<Real>;
  typename BasicHermitian<Real>::Matrix a = m.matrix();
  const Eigen::Index n = a.rows();
  const Real norm = std::max(a.norm(), std::numeric_limits<Real>::min());

  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps && off_norm() > tol * norm; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real r = std::abs(a(p, q));
        if (r <= std::numeric_limits<Real>::min()) continue;
        // Phase rotation makes a(p,q) real and positive, then a real rotation
        // annihilates it.
        const Scalar phase = a(p, q) / r;
        const Real theta = (a(q, q).real() - a(p, p).real()) / (2 * r);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real s = t * c;
        // Columns p,q of U: u_p = c e_p - s conj(phase) e_q, u_q = s e_p + c conj(phase) e_q
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(phase) * akq;
          a(k, q) = s * akp + c * std::conj(phase) * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
      }
    }
  }
  std::vector<Real> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Smallest eigenvalue: closed form for qubits, Jacobi otherwise.
template <typename Real>
Real min_eigenvalue(const BasicHermitian<Real>& m) {
  if (m.dim() == 1) return m(0, 0).real();
  if (m.dim() == 2) {
    const Real mean = (m(0, 0).real() + m(1, 1).real()) / 2;
    const Real half_diff = (m(0, 0).real() - m(1, 1).real()) / 2;
    return mean - std::hypot(half_diff, std::abs(m(1, 0)));
  }
  return jacobi_eigenvalues(m).front();
}

template <typename Real>
Real max_eigenvalue(const BasicHermitian<Real>& m) {
  return -min_eigenvalue(Real(-1) * m);
}

template <typename Real>
bool is_density_operator(const BasicHermitian<Real>& m, Real tol) {
  return min_eigenvalue(m) >= -tol && std::abs(m.trace() - 1) <= tol;
}

/// Uhlmann fidelity (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2 of two density operators.
template <typename Real>
Real state_fidelity(const BasicHermitian<Real>& r1, const BasicHermitian<Real>& r2,
                    Real tol = Real(1e-9)) {
  if (r1.dim() != r2.dim()) throw DimensionError("fidelity of states of different dimension");
  if (!is_density_operator(r1, tol) || !is_density_operator(r2, tol)) {
    throw InvalidInput("state_fidelity requires unit-trace PSD operators");
  }
  Real f;
  if (r1.dim() == 2) {
    auto det = [](const BasicHermitian<Real>& r) {
      return (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real();
    };
    f = trace_product(r1, r2) + 2 * std::sqrt(std::max(Real(0), det(r1) * det(r2)));
  } else {
    using Matrix = typename BasicHermitian<Real>::Matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> es(r1.matrix());
    const Matrix sqrt1 = es.eigenvectors() *
                         es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().asDiagonal() *
                         es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> inner(sqrt1 * r2.matrix() * sqrt1, Eigen::EigenvaluesOnly);
    const Real root = inner.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().sum();
    f = root * root;
  }
  return std::clamp(f, Real(0), Real(1));
}

extern template class BasicHermitian<double>;

}  // namespace steerkit
