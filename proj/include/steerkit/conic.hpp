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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steerkit/hermitian.hpp"

namespace steerkit {

/// A PSD block variable. Real blocks are real symmetric; complex blocks Hermitian.
struct BlockSpec {
  int dim = 1;
  bool real = false;
  int svec_length() const { return real ? dim * (dim + 1) / 2 : dim * dim; }
};

/// Real coordinates of a block: diagonal first, then per pair i<j (row-major)
/// sqrt2*Re and, for complex blocks, sqrt2*Im. svec(A).svec(B) = Tr[A B].
Eigen::VectorXd svec(const Eigen::MatrixXcd& m, bool real = false);
Eigen::MatrixXcd smat(const Eigen::VectorXd& v, int dim, bool real = false);
/// Orthonormal Hermitian basis E_k with svec(X)_k = Tr[E_k X].
std::vector<HermitianOperator> hermitian_basis(int dim, bool real = false);

enum class Sense { kMinimize, kMaximize, kFeasibility };

struct SparseEntry {
  int col;
  double value;
};

/// minimize/maximize c.x subject to A x = b, x in the product of PSD cones.
struct ConicProgram {
  std::vector<BlockSpec> blocks;
  Eigen::VectorXd objective;
  std::vector<std::vector<SparseEntry>> rows;
  std::vector<double> rhs;
  Sense sense = Sense::kFeasibility;

  int num_vars() const;
  int block_offset(int block) const;
  Eigen::MatrixXd dense_constraints() const;
};

/// Incremental construction of a ConicProgram in terms of block matrices.
class ProgramBuilder {
 public:
  int add_block(int dim, bool real = false);
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const BlockSpec& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }

  int add_row(double rhs);
  int num_rows() const { return static_cast<int>(rhs_.size()); }
  void add_coefficient(int row, int block, int coord, double value);
  /// row += scale * Tr[h X_block].
  void add_trace_term(int row, int block, const HermitianOperator& h, double scale = 1.0);

  /// One term of a matrix equality: coeff * X_block, or, with `shape` set,
  /// coeff * x * shape for a 1x1 block x.
  struct MatrixTerm {
    int block;
    double coeff = 1.0;
    const HermitianOperator* shape = nullptr;
  };
  /// Sum of terms = rhs, one row per real coordinate; returns the first row.
  int add_matrix_equality(const std::vector<MatrixTerm>& terms, const HermitianOperator& rhs);

  void add_objective(int block, const HermitianOperator& h, double scale = 1.0);
  void add_objective_coefficient(int block, int coord, double value);
  void set_sense(Sense s) { sense_ = s; }

  ConicProgram build() const;

 private:
  int offset(int block) const;
  std::vector<BlockSpec> blocks_;
  std::vector<int> offsets_;
  int total_ = 0;
  std::vector<std::vector<SparseEntry>> rows_;
  std::vector<double> rhs_;
  std::vector<std::pair<int, double>> objective_;
  Sense sense_ = Sense::kFeasibility;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string to_string(SolveStatus s);

struct SolverSettings {
  int max_iterations = 200;
  double feasibility_tol = 1e-10;
  double gap_tol = 1e-9;
  double step_fraction = 0.99;
  /// A stalled iterate is accepted when within this multiple of the tolerances.
  double stall_relaxation = 100;
  /// Relative threshold for dropping dependent equality rows.
  double rank_tol = 1e-10;
};

/// For kOptimal: primal blocks, multipliers y and dual slack blocks S = c - A^T y.
/// For kInfeasible: dual_eq is a Farkas ray with b.y = 1 and dual_psd = -A^T y (PSD).
/// For kUnbounded: primal is a ray with A x = 0 and c.x < 0.
struct ConicSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<HermitianOperator> primal;
  Eigen::VectorXd dual_eq;
  std::vector<HermitianOperator> dual_psd;
  double objective_value = 0;
  double dual_objective = 0;
  double gap = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  int iterations = 0;
  int dropped_rows = 0;
};

ConicSolution solve(const ConicProgram& p, const SolverSettings& settings = {});

struct CertificateThresholds {
  double primal_residual = 1e-8;
  double gap = 1e-7;
  double dual_residual = 1e-7;
  double psd = 1e-8;
};

/// Recomputes residuals, cone membership and gap from the program data alone.
bool verify_certificate(const ConicProgram& p, const ConicSolution& s, const CertificateThresholds& t = {});

/// Plain-text dump: block dims, objective and constraint triplets.
void dump_program(const ConicProgram& p, std::ostream& out);

}  // namespace steerkit
