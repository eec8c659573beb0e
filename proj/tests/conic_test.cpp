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

#include "steerkit/conic.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace steerkit {
namespace {

HermitianOperator diag(double a, double b) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return HermitianOperator::from_matrix(m);
}

TEST(Svec, InnerProductIsTrace) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  for (int d = 1; d <= 4; ++d) {
    Eigen::MatrixXcd a(d, d), b(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        a(i, j) = {n(rng), n(rng)};
        b(i, j) = {n(rng), n(rng)};
      }
    a = (a + a.adjoint()).eval();
    b = (b + b.adjoint()).eval();
    EXPECT_NEAR(svec(a).dot(svec(b)), (a * b).trace().real(), 1e-12);
    EXPECT_LE((smat(svec(a), d) - a).cwiseAbs().maxCoeff(), 1e-14);
    const auto basis = hermitian_basis(d);
    ASSERT_EQ(static_cast<int>(basis.size()), d * d);
    for (int k = 0; k < d * d; ++k)
      EXPECT_NEAR(trace_product(basis[static_cast<std::size_t>(k)], HermitianOperator::from_matrix(a)), svec(a)(k), 1e-12);
  }
}

TEST(Solve, MinimizeLinearOverDensityMatrices) {
  ProgramBuilder b;
  const int x = b.add_block(2);
  b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(2));
  b.add_objective(x, diag(1, 2));
  b.set_sense(Sense::kMinimize);
  const auto p = b.build();
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 1, 1e-8);
  EXPECT_LE(max_abs_difference(s.primal[0], diag(1, 0)), 1e-6);
  EXPECT_TRUE(verify_certificate(p, s));
}

TEST(Solve, MaximizeMatchesLargestEigenvalue) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 10; ++t) {
    Eigen::MatrixXcd g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = {n(rng), n(rng)};
    const auto h = HermitianOperator::from_matrix((g + g.adjoint()) / 2.0);
    ProgramBuilder b;
    const int x = b.add_block(3);
    b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(3));
    b.add_objective(x, h);
    b.set_sense(Sense::kMaximize);
    const auto p = b.build();
    const auto s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, max_eigenvalue(h), 1e-8);
    EXPECT_TRUE(verify_certificate(p, s));
  }
}

TEST(Solve, InfeasibleProgramYieldsFarkasRay) {
  // X PSD with Tr[Z X] = 2 and Tr X = 1 is impossible.
  ProgramBuilder b;
  const int x = b.add_block(2);
  b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(2));
  b.add_trace_term(b.add_row(2.0), x, pauli::Z());
  const auto p = b.build();
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kInfeasible);
  EXPECT_TRUE(verify_certificate(p, s));
}

TEST(Solve, InconsistentDependentRowsAreInfeasible) {
  ProgramBuilder b;
  const int x = b.add_block(1);
  b.add_coefficient(b.add_row(1.0), x, 0, 1.0);
  b.add_coefficient(b.add_row(2.0), x, 0, 2.0);
  b.add_coefficient(b.add_row(3.0), x, 0, 1.0);
  const auto p = b.build();
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kInfeasible);
  EXPECT_TRUE(verify_certificate(p, s));
}

TEST(Solve, ConsistentDependentRowsAreDropped) {
  ProgramBuilder b;
  const int x = b.add_block(2);
  for (int k = 1; k <= 3; ++k) b.add_trace_term(b.add_row(k), x, HermitianOperator::identity(2) * k);
  b.add_objective(x, pauli::Z());
  b.set_sense(Sense::kMinimize);
  const auto p = b.build();
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::kOptimal);
  EXPECT_EQ(s.dropped_rows, 2);
  EXPECT_NEAR(s.objective_value, -1, 1e-8);
  EXPECT_TRUE(verify_certificate(p, s));
}

TEST(Solve, UnboundedProgramIsReported) {
  ProgramBuilder b;
  const int x = b.add_block(1);
  const int y = b.add_block(1);
  const int r = b.add_row(1.0);
  b.add_coefficient(r, x, 0, 1.0);
  b.add_coefficient(r, y, 0, -1.0);
  b.add_objective_coefficient(x, 0, -1.0);
  b.set_sense(Sense::kMinimize);
  const auto p = b.build();
  const auto s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::kUnbounded);
  EXPECT_TRUE(verify_certificate(p, s));
}

TEST(Solve, DeterministicAcrossRuns) {
  ProgramBuilder b;
  const int x = b.add_block(3);
  const int y = b.add_block(2);
  b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(3));
  b.add_trace_term(b.add_row(1.0), y, HermitianOperator::identity(2));
  Eigen::MatrixXcd c(3, 3);
  c << 1, std::complex<double>(0, 1), 0, std::complex<double>(0, -1), 2, 0.5, 0, 0.5, -1;
  b.add_objective(x, HermitianOperator::from_matrix(c));
  b.add_objective(y, pauli::X());
  b.set_sense(Sense::kMinimize);
  const auto p = b.build();
  const auto s1 = solve(p), s2 = solve(p);
  EXPECT_EQ(s1.status, s2.status);
  EXPECT_EQ(s1.iterations, s2.iterations);
  EXPECT_LE(std::abs(s1.objective_value - s2.objective_value), 1e-10);
}

TEST(VerifyCertificate, RejectsPerturbedPrimal) {
  ProgramBuilder b;
  const int x = b.add_block(2);
  b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(2));
  b.add_objective(x, diag(1, 2));
  b.set_sense(Sense::kMinimize);
  const auto p = b.build();
  auto s = solve(p);
  ASSERT_TRUE(verify_certificate(p, s));
  s.primal[0] += diag(1e-3, 0);
  EXPECT_FALSE(verify_certificate(p, s));
}

TEST(Solve, WeakDualityOnReportedSolutions) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 10; ++t) {
    ProgramBuilder b;
    const int x = b.add_block(2);
    const int y = b.add_block(2);
    b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(2));
    b.add_trace_term(b.add_row(1.0), y, HermitianOperator::identity(2));
    const int r = b.add_row(0.0);
    b.add_trace_term(r, x, pauli::Z());
    b.add_trace_term(r, y, pauli::X(), -1.0);
    b.add_objective(x, pauli::X() * n(rng) + pauli::Y() * n(rng));
    b.add_objective(y, pauli::Z() * n(rng));
    b.set_sense(Sense::kMinimize);
    const auto s = solve(b.build());
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_GE(s.objective_value - s.dual_objective, -1e-9);
    EXPECT_LE(s.objective_value - s.dual_objective, 1e-7);
  }
}

// min ||F z - g|| over |z_i| <= 1: z_i is the off-diagonal of [[1, z],[z, 1]]
// and the norm uses 2x2 arrow blocks [[t, r_j],[r_j, u_j]] with sum u_j = t.
TEST(Solve, ArrowEncodingMatchesGridSearch) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd f(3, 2);
    Eigen::Vector3d g;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) f(i, j) = n(rng);
      g(i) = 2 * n(rng);
    }
    ProgramBuilder b;
    std::vector<int> zb;
    for (int j = 0; j < 2; ++j) {
      zb.push_back(b.add_block(2, true));
      b.add_coefficient(b.add_row(1.0), zb.back(), 0, 1.0);
      b.add_coefficient(b.add_row(1.0), zb.back(), 1, 1.0);
    }
    const int t = b.add_block(1, true);
    const int usum = b.add_row(0.0);
    b.add_coefficient(usum, t, 0, -1.0);
    const double s2 = std::sqrt(2.0);
    for (int i = 0; i < 3; ++i) {
      const int arrow = b.add_block(2, true);
      const int tie = b.add_row(0.0);
      b.add_coefficient(tie, arrow, 0, 1.0);
      b.add_coefficient(tie, t, 0, -1.0);
      b.add_coefficient(usum, arrow, 1, 1.0);
      // r_i = (F z)_i - g_i
      const int res = b.add_row(-g(i));
      b.add_coefficient(res, arrow, 2, 1.0 / s2);
      for (int j = 0; j < 2; ++j) b.add_coefficient(res, zb[static_cast<std::size_t>(j)], 2, -f(i, j) / s2);
    }
    b.add_objective_coefficient(t, 0, 1.0);
    b.set_sense(Sense::kMinimize);
    const auto p = b.build();
    const auto s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::kOptimal);
    EXPECT_TRUE(verify_certificate(p, s));
    double best = 1e300;
    const int steps = 2000;
    for (int a = 0; a <= steps; ++a)
      for (int c = 0; c <= steps; c += 1) {
        const Eigen::Vector2d z(-1 + 2.0 * a / steps, -1 + 2.0 * c / steps);
        best = std::min(best, (f * z - g).norm());
      }
    EXPECT_NEAR(s.objective_value, best, 1e-4);
  }
}

TEST(DumpProgram, ListsBlocksAndTriplets) {
  ProgramBuilder b;
  const int x = b.add_block(2);
  b.add_trace_term(b.add_row(1.0), x, HermitianOperator::identity(2));
  std::ostringstream out;
  dump_program(b.build(), out);
  EXPECT_NE(out.str().find("blocks 1"), std::string::npos);
  EXPECT_NE(out.str().find("0 rhs 1"), std::string::npos);
}

}  // namespace
}  // namespace steerkit
