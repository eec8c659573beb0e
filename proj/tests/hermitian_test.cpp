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

#include "steerkit/hermitian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace steerkit {
namespace {

using C = std::complex<double>;

HermitianOperator random_hermitian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = {n(rng), n(rng)};
  return HermitianOperator::from_matrix((m + m.adjoint()) / 2.0);
}

HermitianOperator random_state(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = {n(rng), n(rng)};
  Eigen::MatrixXcd r = g * g.adjoint();
  r /= r.trace().real();
  return HermitianOperator::from_matrix((r + r.adjoint()) / 2.0);
}

// Product of Givens-like rotations with random phases.
Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0, 2 * M_PI);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(d, d);
  for (int p = 0; p < d; ++p)
    for (int r = p + 1; r < d; ++r) {
      const double th = u(rng), ph = u(rng);
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(d, d);
      g(p, p) = std::cos(th);
      g(r, r) = std::cos(th);
      g(p, r) = -std::sin(th) * std::exp(C(0, ph));
      g(r, p) = std::sin(th) * std::exp(C(0, -ph));
      q = g * q;
    }
  return q;
}

TEST(PauliDecompose, Identity) {
  const auto c = pauli_decompose(pauli::I());
  EXPECT_DOUBLE_EQ(c.identity, 1);
  EXPECT_DOUBLE_EQ(c.x, 0);
  EXPECT_DOUBLE_EQ(c.y, 0);
  EXPECT_DOUBLE_EQ(c.z, 0);
}

TEST(PauliDecompose, WiredSteeringBlock) {
  const auto m = (pauli::I() + (pauli::Z() + pauli::X()) / std::sqrt(2.0)) / 4.0;
  const auto c = pauli_decompose(m);
  EXPECT_NEAR(c.identity, 0.25, 1e-15);
  EXPECT_NEAR(c.x, 0.25 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c.y, 0, 1e-15);
  EXPECT_NEAR(c.z, 0.25 / std::sqrt(2.0), 1e-15);
}

TEST(PauliDecompose, ZPlusX) {
  const auto c = pauli_decompose(pauli::Z() + pauli::X());
  EXPECT_DOUBLE_EQ(c.identity, 0);
  EXPECT_DOUBLE_EQ(c.x, 1);
  EXPECT_DOUBLE_EQ(c.y, 0);
  EXPECT_DOUBLE_EQ(c.z, 1);
}

TEST(PauliDecompose, RejectsWrongDimension) {
  EXPECT_THROW(pauli_decompose(HermitianOperator::identity(3)), DimensionError);
}

TEST(PauliDecompose, RecomposesRandomOperators) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto m = random_hermitian(rng, 2);
    EXPECT_LE(max_abs_difference(pauli_compose(pauli_decompose(m)), m), 1e-12);
  }
}

TEST(Hermitian, RejectsNonHermitian) {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 1, 0, 1;
  EXPECT_THROW(HermitianOperator::from_matrix(m), InvalidInput);
  EXPECT_THROW(HermitianOperator(0), DimensionError);
}

TEST(MinEigenvalue, Examples) {
  EXPECT_DOUBLE_EQ(min_eigenvalue(pauli::Z()), -1);
  const auto pure = pauli::I() / 2.0 + (pauli::Z() + pauli::X()) / (2 * std::sqrt(2.0));
  EXPECT_NEAR(min_eigenvalue(pure), 0, 1e-15);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = 0.7;
  EXPECT_DOUBLE_EQ(min_eigenvalue(HermitianOperator::from_matrix(d)), 0.3);
}

TEST(MinEigenvalue, JacobiMatchesEigenSolver) {
  std::mt19937_64 rng(2);
  for (int d = 3; d <= 8; ++d)
    for (int t = 0; t < 20; ++t) {
      const auto m = random_hermitian(rng, d);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.matrix());
      const auto ev = jacobi_eigenvalues(m);
      for (int k = 0; k < d; ++k) EXPECT_NEAR(ev[static_cast<std::size_t>(k)], es.eigenvalues()(k), 1e-10);
    }
}

TEST(MinEigenvalue, UnitarilyInvariant) {
  std::mt19937_64 rng(3);
  for (int d = 2; d <= 6; ++d)
    for (int t = 0; t < 20; ++t) {
      const auto m = random_hermitian(rng, d);
      const auto u = random_unitary(rng, d);
      EXPECT_NEAR(min_eigenvalue(m.conjugated(u)), min_eigenvalue(m), 1e-10);
    }
}

TEST(StateFidelity, Examples) {
  const auto zero = (pauli::I() + pauli::Z()) / 2.0;
  const auto one = (pauli::I() - pauli::Z()) / 2.0;
  EXPECT_NEAR(state_fidelity(zero, zero), 1, 1e-15);
  EXPECT_NEAR(state_fidelity(zero, one), 0, 1e-15);
  // Closed form: Tr = 1/2, det(I/2) = 1/4, det|0><0| = 0.
  EXPECT_NEAR(state_fidelity(pauli::I() / 2.0, zero), 0.5, 1e-15);
}

TEST(StateFidelity, RejectsInvalidStates) {
  EXPECT_THROW(state_fidelity(pauli::I(), pauli::I() / 2.0), InvalidInput);
  EXPECT_THROW(state_fidelity(pauli::Z(), pauli::I() / 2.0), InvalidInput);
}

TEST(StateFidelity, SymmetricAndMaximalOnlyOnEquality) {
  std::mt19937_64 rng(4);
  for (int d : {2, 3, 4}) {
    for (int t = 0; t < 30; ++t) {
      const auto a = random_state(rng, d);
      const auto b = random_state(rng, d);
      EXPECT_NEAR(state_fidelity(a, b), state_fidelity(b, a), 1e-9);
      EXPECT_LT(state_fidelity(a, b), 1 - 1e-9);
      EXPECT_NEAR(state_fidelity(a, a), 1, 1e-9);
    }
  }
}

TEST(StateFidelity, QubitClosedFormMatchesUhlmann) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_state(rng, 2);
    const auto b = random_state(rng, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
    const Eigen::MatrixXcd sq = es.operatorSqrt();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> in(sq * b.matrix() * sq);
    const double root = in.eigenvalues().cwiseMax(0).cwiseSqrt().sum();
    EXPECT_NEAR(state_fidelity(a, b), root * root, 1e-10);
  }
}

}  // namespace
}  // namespace steerkit
