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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "steerkit/error.hpp"

namespace steerkit {

namespace {

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

Eigen::VectorXd svec(const Eigen::MatrixXcd& m, bool real) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v(BlockSpec{d, real}.svec_length());
  int k = 0;
  for (int i = 0; i < d; ++i) v(k++) = m(i, i).real();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      // Average the two triangles so slightly non-Hermitian input is projected.
      const std::complex<double> z = (m(i, j) + std::conj(m(j, i))) / 2.0;
      v(k++) = kSqrt2 * z.real();
      if (!real) v(k++) = -kSqrt2 * z.imag();
    }
  }
  return v;
}

Eigen::MatrixXcd smat(const Eigen::VectorXd& v, int d, bool real) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) m(i, i) = v(k++);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double re = v(k++) / kSqrt2;
      const double im = real ? 0.0 : -v(k++) / kSqrt2;
      m(i, j) = {re, im};
      m(j, i) = {re, -im};
    }
  }
  return m;
}

std::vector<HermitianOperator> hermitian_basis(int dim, bool real) {
  const int n = BlockSpec{dim, real}.svec_length();
  std::vector<HermitianOperator> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(k) = 1;
    basis.push_back(HermitianOperator::from_matrix(smat(e, dim, real)));
  }
  return basis;
}

int ConicProgram::num_vars() const {
  int n = 0;
  for (const auto& b : blocks) n += b.svec_length();
  return n;
}

int ConicProgram::block_offset(int block) const {
  int n = 0;
  for (int b = 0; b < block; ++b) n += blocks[static_cast<std::size_t>(b)].svec_length();
  return n;
}

Eigen::MatrixXd ConicProgram::dense_constraints() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), num_vars());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& e : rows[i]) a(static_cast<Eigen::Index>(i), e.col) += e.value;
  return a;
}

int ProgramBuilder::add_block(int dim, bool real) {
  if (dim < 1) throw DimensionError("block dimension must be >= 1");
  blocks_.push_back({dim, real});
  offsets_.push_back(total_);
  total_ += blocks_.back().svec_length();
  return static_cast<int>(blocks_.size()) - 1;
}

int ProgramBuilder::offset(int block) const {
  if (block < 0 || block >= num_blocks()) throw DimensionError("unknown block index");
  return offsets_[static_cast<std::size_t>(block)];
}

int ProgramBuilder::add_row(double rhs) {
  rows_.emplace_back();
  rhs_.push_back(rhs);
  return num_rows() - 1;
}

void ProgramBuilder::add_coefficient(int row, int block, int coord, double value) {
  if (row < 0 || row >= num_rows()) throw DimensionError("unknown row index");
  if (coord < 0 || coord >= this->block(block).svec_length()) throw DimensionError("coordinate out of block");
  if (value != 0.0) rows_[static_cast<std::size_t>(row)].push_back({offset(block) + coord, value});
}

void ProgramBuilder::add_trace_term(int row, int block, const HermitianOperator& h, double scale) {
  const BlockSpec& b = this->block(block);
  if (h.dim() != b.dim) throw DimensionError("trace term dimension differs from block");
  const Eigen::VectorXd v = svec(h.matrix(), b.real);
  for (int k = 0; k < v.size(); ++k) add_coefficient(row, block, k, scale * v(k));
}

int ProgramBuilder::add_matrix_equality(const std::vector<MatrixTerm>& terms, const HermitianOperator& rhs) {
  const int d = static_cast<int>(rhs.dim());
  const Eigen::VectorXd r = svec(rhs.matrix());
  const int first = num_rows();
  for (int k = 0; k < r.size(); ++k) add_row(r(k));
  for (const auto& t : terms) {
    const BlockSpec& b = block(t.block);
    if (t.shape) {
      if (b.dim != 1 || t.shape->dim() != d) throw DimensionError("shaped term needs a 1x1 block");
      const Eigen::VectorXd s = svec(t.shape->matrix());
      for (int k = 0; k < s.size(); ++k) add_coefficient(first + k, t.block, 0, t.coeff * s(k));
    } else {
      if (b.dim != d) throw DimensionError("matrix term dimension differs from equality");
      if (b.real) {
        // Real block: only the real coordinates couple; imaginary rows get nothing.
        int k = d, kr = d;
        for (int i = 0; i < d; ++i) add_coefficient(first + i, t.block, i, t.coeff);
        for (int i = 0; i < d; ++i)
          for (int j = i + 1; j < d; ++j) {
            add_coefficient(first + k, t.block, kr++, t.coeff);
            k += 2;
          }
      } else {
        for (int k = 0; k < r.size(); ++k) add_coefficient(first + k, t.block, k, t.coeff);
      }
    }
  }
  return first;
}

void ProgramBuilder::add_objective(int block, const HermitianOperator& h, double scale) {
  const BlockSpec& b = this->block(block);
  if (h.dim() != b.dim) throw DimensionError("objective term dimension differs from block");
  const Eigen::VectorXd v = svec(h.matrix(), b.real);
  for (int k = 0; k < v.size(); ++k) add_objective_coefficient(block, k, scale * v(k));
}

void ProgramBuilder::add_objective_coefficient(int block, int coord, double value) {
  if (coord < 0 || coord >= this->block(block).svec_length()) throw DimensionError("coordinate out of block");
  objective_.emplace_back(offset(block) + coord, value);
}

ConicProgram ProgramBuilder::build() const {
  ConicProgram p;
  p.blocks = blocks_;
  p.objective = Eigen::VectorXd::Zero(total_);
  for (const auto& [col, v] : objective_) p.objective(col) += v;
  p.rows = rows_;
  p.rhs = rhs_;
  p.sense = sense_;
  return p;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

/// Column range and the rows that touch it, with the dense slice of A.
struct BlockSlice {
  BlockSpec spec;
  int offset = 0;
  std::vector<int> rows;
  Eigen::MatrixXd a;  // rows.size() x svec_length
};

struct Scaling {
  Eigen::MatrixXcd r;        // R, with W = R R^H
  Eigen::MatrixXcd r_inv;    // R^{-1}
  Eigen::VectorXd lambda;    // scaled point, diagonal
  Eigen::MatrixXd w_op;      // v -> svec(W smat(v) W)
};

Eigen::MatrixXcd cholesky_factor(const Eigen::MatrixXcd& m) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Iterate left the interior numerically; fall back to a symmetric square root.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const double floor = 1e-300;
  return es.eigenvectors() * es.eigenvalues().cwiseMax(floor).cwiseSqrt().asDiagonal();
}

Scaling nt_scaling(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& s, const BlockSpec& spec) {
  const Eigen::MatrixXcd lx = cholesky_factor(x);
  const Eigen::MatrixXcd ls = cholesky_factor(s);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ls.adjoint() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Scaling sc;
  sc.lambda = svd.singularValues().cwiseMax(1e-300);
  const Eigen::VectorXd inv_sqrt = sc.lambda.cwiseSqrt().cwiseInverse();
  sc.r = lx * svd.matrixV() * inv_sqrt.asDiagonal();
  // R^{-1} = Sigma^{-1/2} U^H Ls^H, since Ls^H Lx V = U Sigma.
  sc.r_inv = inv_sqrt.asDiagonal() * svd.matrixU().adjoint() * ls.adjoint();
  const Eigen::MatrixXcd w = sc.r * sc.r.adjoint();
  const int n = spec.svec_length();
  sc.w_op.resize(n, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(k) = 1;
    sc.w_op.col(k) = svec(w * smat(e, spec.dim, spec.real) * w, spec.real);
  }
  return sc;
}

/// Largest alpha with lambda + alpha * d PSD (d in scaled coordinates), capped.
double max_step(const Eigen::VectorXd& lambda, const Eigen::MatrixXcd& d) {
  const Eigen::VectorXd is = lambda.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd m = is.asDiagonal() * d * is.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return lo >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

double max_step_scalar(double v, double dv) {
  return dv >= 0 ? std::numeric_limits<double>::infinity() : -v / dv;
}

class HsdSolver {
 public:
  HsdSolver(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
            const std::vector<BlockSpec>& blocks, const SolverSettings& settings)
      : a_(a), b_(b), c_(c), settings_(settings) {
    int off = 0;
    nu_ = 0;
    for (const auto& spec : blocks) {
      BlockSlice sl;
      sl.spec = spec;
      sl.offset = off;
      const int n = spec.svec_length();
      for (int i = 0; i < a.rows(); ++i)
        if (a.row(i).segment(off, n).cwiseAbs().maxCoeff() > 0) sl.rows.push_back(i);
      sl.a.resize(static_cast<Eigen::Index>(sl.rows.size()), n);
      for (std::size_t r = 0; r < sl.rows.size(); ++r)
        sl.a.row(static_cast<Eigen::Index>(r)) = a.row(sl.rows[r]).segment(off, n);
      slices_.push_back(std::move(sl));
      off += n;
      nu_ += spec.dim;
    }
    n_ = off;
  }

  struct Result {
    SolveStatus status;
    Eigen::VectorXd x, y, s;
    double tau, kappa;
    int iterations;
    double pres, dres, gap;
  };

  Result run() {
    const Eigen::Index m = a_.rows();
    Eigen::VectorXd x(n_), s(n_), y = Eigen::VectorXd::Zero(m);
    for (const auto& sl : slices_) {
      const Eigen::VectorXd id = svec(Eigen::MatrixXcd::Identity(sl.spec.dim, sl.spec.dim), sl.spec.real);
      x.segment(sl.offset, id.size()) = id;
      s.segment(sl.offset, id.size()) = id;
    }
    double tau = 1, kappa = 1;
    const double bnorm = 1 + (b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);
    const double cnorm = 1 + (c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0);
    Result res{SolveStatus::kNumericalFailure, x, y, s, tau, kappa, 0, 0, 0, 0};

    int stalled = 0, since_best = 0;
    double best_merit = std::numeric_limits<double>::infinity();
    Result best = res;
    for (int it = 0; it <= settings_.max_iterations; ++it) {
      const Eigen::VectorXd rp = a_ * x - b_ * tau;
      const Eigen::VectorXd rd = a_.transpose() * y + s - c_ * tau;
      const double rg = c_.dot(x) - b_.dot(y) + kappa;
      const double mu = (x.dot(s) + tau * kappa) / (nu_ + 1);

      const double pres = (m ? rp.cwiseAbs().maxCoeff() : 0.0) / tau / bnorm;
      const double dres = rd.cwiseAbs().maxCoeff() / tau / cnorm;
      const double pobj = c_.dot(x) / tau, dobj = b_.dot(y) / tau;
      const double gap = std::abs(pobj - dobj);
      res = {SolveStatus::kNumericalFailure, x, y, s, tau, kappa, it, pres, dres, gap};
      const double merit = std::max({pres, dres, gap / (1 + std::min(std::abs(pobj), std::abs(dobj)))});
      if (merit < best_merit) {
        best_merit = merit;
        best = res;
        since_best = 0;
      } else if (++since_best > 25) {
        break;
      }
      if (trace_)
        std::fprintf(stderr, "%3d pres %.2e dres %.2e gap %.2e pobj %+.9e tau %.2e kappa %.2e mu %.2e\n", it, pres,
                     dres, gap, pobj, tau, kappa, mu);
      if (pres <= settings_.feasibility_tol && dres <= settings_.feasibility_tol &&
          gap <= settings_.gap_tol * (1 + std::min(std::abs(pobj), std::abs(dobj)))) {
        res.status = SolveStatus::kOptimal;
        return res;
      }
      const double by = b_.dot(y);
      if (by > 0) {
        const double ray = (a_.transpose() * y + s).cwiseAbs().maxCoeff() / by;
        if (ray <= settings_.feasibility_tol) {
          res.status = SolveStatus::kInfeasible;
          return res;
        }
      }
      const double cx = c_.dot(x);
      if (cx < 0 && m) {
        const double ray = (a_ * x).cwiseAbs().maxCoeff() / -cx;
        if (ray <= settings_.feasibility_tol) {
          res.status = SolveStatus::kUnbounded;
          return res;
        }
      }
      if (it == settings_.max_iterations) break;
      if (!std::isfinite(mu) || !std::isfinite(tau) || !std::isfinite(kappa)) break;

      // Scaling and normal matrix.
      std::vector<Scaling> sc;
      sc.reserve(slices_.size());
      Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(m, m);
      for (const auto& sl : slices_) {
        const int n = sl.spec.svec_length();
        sc.push_back(nt_scaling(smat(x.segment(sl.offset, n), sl.spec.dim, sl.spec.real),
                                smat(s.segment(sl.offset, n), sl.spec.dim, sl.spec.real), sl.spec));
        if (sl.rows.empty()) continue;
        const Eigen::MatrixXd part = sl.a * sc.back().w_op * sl.a.transpose();
        for (std::size_t i = 0; i < sl.rows.size(); ++i)
          for (std::size_t j = 0; j < sl.rows.size(); ++j)
            mm(sl.rows[i], sl.rows[j]) += part(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      Factor factor(mm);

      auto apply_w = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd out(n_);
        for (std::size_t k = 0; k < slices_.size(); ++k) {
          const auto& sl = slices_[k];
          const int n = sl.spec.svec_length();
          out.segment(sl.offset, n) = sc[k].w_op * v.segment(sl.offset, n);
        }
        return out;
      };

      const Eigen::VectorXd wc = apply_w(c_);
      const Eigen::VectorXd v_dir = factor.solve(a_ * wc + b_);
      const Eigen::VectorXd q = apply_w(a_.transpose() * v_dir) - wc;
      const double denom_base = c_.dot(q) - b_.dot(v_dir);

      struct Direction {
        Eigen::VectorXd dx, dy, ds;
        double dtau, dkappa;
      };
      auto solve_newton = [&](const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, double r3,
                              const Eigen::VectorXd& r4, double r5) {
        const Eigen::VectorXd u = factor.solve(r1 - a_ * r4 + a_ * apply_w(r2));
        const Eigen::VectorXd p = r4 - apply_w(r2) + apply_w(a_.transpose() * u);
        Direction d;
        d.dtau = (r3 - c_.dot(p) + b_.dot(u) - r5 / tau) / (denom_base - kappa / tau);
        d.dy = u + v_dir * d.dtau;
        d.dx = p + q * d.dtau;
        d.ds = r2 - a_.transpose() * d.dy + c_ * d.dtau;
        d.dkappa = (r5 - kappa * d.dtau) / tau;
        return d;
      };

      // Scaled directions and step length.
      std::vector<Eigen::MatrixXcd> dxt(slices_.size()), dst(slices_.size());
      auto step_length = [&](const Direction& d) {
        double alpha = std::min(max_step_scalar(tau, d.dtau), max_step_scalar(kappa, d.dkappa));
        for (std::size_t k = 0; k < slices_.size(); ++k) {
          const auto& sl = slices_[k];
          const int n = sl.spec.svec_length();
          const Eigen::MatrixXcd dxm = smat(d.dx.segment(sl.offset, n), sl.spec.dim, sl.spec.real);
          const Eigen::MatrixXcd dsm = smat(d.ds.segment(sl.offset, n), sl.spec.dim, sl.spec.real);
          dxt[k] = sc[k].r_inv * dxm * sc[k].r_inv.adjoint();
          dst[k] = sc[k].r.adjoint() * dsm * sc[k].r;
          alpha = std::min({alpha, max_step(sc[k].lambda, dxt[k]), max_step(sc[k].lambda, dst[k])});
        }
        return alpha;
      };

      auto r4_from = [&](auto&& n_of_block) {
        Eigen::VectorXd r4(n_);
        for (std::size_t k = 0; k < slices_.size(); ++k) {
          const auto& sl = slices_[k];
          const Eigen::VectorXd& lam = sc[k].lambda;
          const Eigen::MatrixXcd nb = n_of_block(k);
          Eigen::MatrixXcd rhs(sl.spec.dim, sl.spec.dim);
          for (int i = 0; i < sl.spec.dim; ++i)
            for (int j = 0; j < sl.spec.dim; ++j) rhs(i, j) = 2.0 * nb(i, j) / (lam(i) + lam(j));
          r4.segment(sl.offset, sl.spec.svec_length()) =
              svec(sc[k].r * rhs * sc[k].r.adjoint(), sl.spec.real);
        }
        return r4;
      };

      // Predictor.
      const Eigen::VectorXd r4_aff = -x;
      const Direction aff = solve_newton(-rp, -rd, -rg, r4_aff, -tau * kappa);
      const double alpha_aff = std::min(1.0, step_length(aff));
      const double sigma = std::pow(1 - alpha_aff, 3);

      // Corrector with second-order term from the predictor.
      const std::vector<Eigen::MatrixXcd> dxa = dxt, dsa = dst;
      const Eigen::VectorXd r4 = r4_from([&](std::size_t k) {
        const Eigen::VectorXd& lam = sc[k].lambda;
        const Eigen::MatrixXcd prod = dxa[k] * dsa[k];
        Eigen::MatrixXcd nb = -(prod + prod.adjoint()) / 2.0;
        for (Eigen::Index i = 0; i < lam.size(); ++i) nb(i, i) += sigma * mu - lam(i) * lam(i);
        return nb;
      });
      const double eta = 1 - sigma;
      const Direction dir = solve_newton(-eta * rp, -eta * rd, -eta * rg, r4,
                                         sigma * mu - tau * kappa - aff.dtau * aff.dkappa);
      const double alpha = std::min(1.0, settings_.step_fraction * step_length(dir));
      if (trace_) std::fprintf(stderr, "    alpha_aff %.2e alpha %.2e sigma %.2e ldlt %d\n", alpha_aff, alpha, sigma, factor.regularized());
      if (!(alpha > 0) || !std::isfinite(alpha)) break;
      // Repeated negligible steps mean the iterate is stuck at the boundary.
      stalled = alpha < 1e-9 ? stalled + 1 : 0;
      if (stalled >= 3) break;

      x += alpha * dir.dx;
      y += alpha * dir.dy;
      s += alpha * dir.ds;
      tau += alpha * dir.dtau;
      kappa += alpha * dir.dkappa;
    }
    // Progress stopped short of the target accuracy: fall back to the best
    // iterate seen and accept it if it is within the relaxed tolerances.
    if (res.status == SolveStatus::kNumericalFailure && best_merit < std::numeric_limits<double>::infinity()) {
      best.iterations = res.iterations;
      res = best;
    }
    const double relax = settings_.stall_relaxation;
    const double pobj = c_.dot(res.x) / res.tau, dobj = b_.dot(res.y) / res.tau;
    if (res.pres <= relax * settings_.feasibility_tol && res.dres <= relax * settings_.feasibility_tol &&
        res.gap <= relax * settings_.gap_tol * (1 + std::min(std::abs(pobj), std::abs(dobj))))
      res.status = SolveStatus::kOptimal;
    return res;
  }

 private:
  /// Normal-matrix factorization. Near the boundary M = A W A^T loses rank;
  /// then a slightly regularized Cholesky is used with iterative refinement
  /// against the unregularized matrix.
  class Factor {
   public:
    explicit Factor(const Eigen::MatrixXd& m) : m_(m), llt_(m) {
      if (llt_.info() == Eigen::Success || m.rows() == 0) return;
      regularized_ = true;
      const double scale = std::max(m.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      for (double delta = 1e-14 * scale;; delta *= 100) {
        Eigen::MatrixXd reg = m;
        reg.diagonal().array() += delta;
        llt_.compute(reg);
        if (llt_.info() == Eigen::Success || delta > scale) break;
      }
    }
    bool regularized() const { return regularized_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& r) const {
      if (r.size() == 0) return r;
      Eigen::VectorXd u = llt_.solve(r);
      if (!regularized_) return u;
      for (int k = 0; k < 5; ++k) u += llt_.solve(r - m_ * u);
      return u;
    }

   private:
    const Eigen::MatrixXd& m_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    bool regularized_ = false;
  };

  const Eigen::MatrixXd& a_;
  const Eigen::VectorXd& b_;
  const Eigen::VectorXd& c_;
  SolverSettings settings_;
  std::vector<BlockSlice> slices_;
  int n_ = 0;
  int nu_ = 0;
  bool trace_ = std::getenv("STEERKIT_SOLVER_TRACE") != nullptr;
};

std::vector<HermitianOperator> unpack(const Eigen::VectorXd& v, const std::vector<BlockSpec>& blocks) {
  std::vector<HermitianOperator> out;
  int off = 0;
  for (const auto& b : blocks) {
    const int n = b.svec_length();
    out.push_back(HermitianOperator::from_matrix(smat(v.segment(off, n), b.dim, b.real)));
    off += n;
  }
  return out;
}

}  // namespace

ConicSolution solve(const ConicProgram& p, const SolverSettings& settings) {
  const int n = p.num_vars();
  if (p.objective.size() != n) throw DimensionError("objective length differs from the variable count");
  if (p.rhs.size() != p.rows.size()) throw DimensionError("row and right-hand-side counts differ");
  for (const auto& row : p.rows)
    for (const auto& e : row)
      if (e.col < 0 || e.col >= n) throw DimensionError("constraint column out of range");

  const Eigen::MatrixXd a_full = p.dense_constraints();
  const Eigen::VectorXd b_full = Eigen::Map<const Eigen::VectorXd>(p.rhs.data(), static_cast<Eigen::Index>(p.rhs.size()));
  const double sign = p.sense == Sense::kMaximize ? -1.0 : 1.0;
  const Eigen::VectorXd c = p.sense == Sense::kFeasibility ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(sign * p.objective);
  const Eigen::Index m_full = a_full.rows();

  ConicSolution sol;
  sol.dual_eq = Eigen::VectorXd::Zero(m_full);

  // Drop dependent rows; inconsistent rows give an immediate Farkas ray.
  std::vector<int> keep;
  if (m_full > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_full.transpose());
    qr.setThreshold(settings.rank_tol);
    const Eigen::Index rank = qr.rank();
    for (Eigen::Index k = 0; k < rank; ++k) keep.push_back(static_cast<int>(qr.colsPermutation().indices()(k)));
    std::sort(keep.begin(), keep.end());
    if (rank < m_full) {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a_full);
      cod.setThreshold(settings.rank_tol);
      const Eigen::VectorXd resid = b_full - a_full * cod.solve(b_full);
      const double scale = 1 + b_full.cwiseAbs().maxCoeff();
      if (resid.cwiseAbs().maxCoeff() > 1e-8 * scale) {
        const double by = b_full.dot(resid);
        sol.status = SolveStatus::kInfeasible;
        sol.dual_eq = resid / by;
        sol.primal = unpack(Eigen::VectorXd::Zero(n), p.blocks);
        sol.dual_psd = unpack(-a_full.transpose() * sol.dual_eq, p.blocks);
        sol.dual_objective = 1;
        sol.dropped_rows = static_cast<int>(m_full - rank);
        return sol;
      }
    }
  }
  sol.dropped_rows = static_cast<int>(m_full) - static_cast<int>(keep.size());
  Eigen::MatrixXd a(static_cast<Eigen::Index>(keep.size()), n);
  Eigen::VectorXd b(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = a_full.row(keep[i]);
    b(static_cast<Eigen::Index>(i)) = b_full(keep[i]);
  }

  HsdSolver solver(a, b, c, p.blocks, settings);
  const auto r = solver.run();
  sol.status = r.status;
  sol.iterations = r.iterations;
  sol.primal_residual = r.pres;
  sol.dual_residual = r.dres;
  sol.gap = r.gap;

  Eigen::VectorXd y_full = Eigen::VectorXd::Zero(m_full);
  auto scatter = [&](const Eigen::VectorXd& y) {
    for (std::size_t i = 0; i < keep.size(); ++i) y_full(keep[i]) = y(static_cast<Eigen::Index>(i));
  };

  switch (r.status) {
    case SolveStatus::kOptimal:
    case SolveStatus::kNumericalFailure: {
      const double t = r.tau > 0 ? r.tau : 1.0;
      scatter(r.y / t);
      sol.primal = unpack(r.x / t, p.blocks);
      sol.dual_eq = y_full;
      sol.dual_psd = unpack(r.s / t, p.blocks);
      sol.objective_value = p.objective.dot(r.x / t);
      sol.dual_objective = sign * b.dot(r.y / t);
      if (p.sense == Sense::kFeasibility) sol.objective_value = sol.dual_objective = 0;
      break;
    }
    case SolveStatus::kInfeasible: {
      const double by = b.dot(r.y);
      scatter(r.y / by);
      sol.dual_eq = y_full;
      sol.primal = unpack(Eigen::VectorXd::Zero(n), p.blocks);
      sol.dual_psd = unpack(-a_full.transpose() * y_full, p.blocks);
      sol.dual_objective = 1;
      break;
    }
    case SolveStatus::kUnbounded: {
      const double cx = -c.dot(r.x);
      sol.primal = unpack(r.x / cx, p.blocks);
      sol.dual_psd = unpack(Eigen::VectorXd::Zero(n), p.blocks);
      sol.objective_value = -sign * std::numeric_limits<double>::infinity();
      break;
    }
  }
  return sol;
}

bool verify_certificate(const ConicProgram& p, const ConicSolution& s, const CertificateThresholds& t) {
  const int n = p.num_vars();
  const Eigen::MatrixXd a = p.dense_constraints();
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(p.rhs.data(), static_cast<Eigen::Index>(p.rhs.size()));
  if (s.primal.size() != p.blocks.size()) return false;
  auto pack = [&](const std::vector<HermitianOperator>& blocks) {
    Eigen::VectorXd v(n);
    int off = 0;
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      const int len = p.blocks[k].svec_length();
      v.segment(off, len) = svec(blocks[k].matrix(), p.blocks[k].real);
      off += len;
    }
    return v;
  };
  auto cone_ok = [&](const std::vector<HermitianOperator>& blocks, double scale) {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[k].dim() != p.blocks[k].dim) return false;
      if (min_eigenvalue(blocks[k]) < -t.psd * scale) return false;
    }
    return true;
  };
  const double bnorm = 1 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  const double sign = p.sense == Sense::kMaximize ? -1.0 : 1.0;
  const Eigen::VectorXd c = p.sense == Sense::kFeasibility ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(sign * p.objective);

  switch (s.status) {
    case SolveStatus::kOptimal: {
      if (s.dual_eq.size() != a.rows() || s.dual_psd.size() != p.blocks.size()) return false;
      const Eigen::VectorXd x = pack(s.primal);
      const Eigen::VectorXd sv = pack(s.dual_psd);
      const double pres = a.rows() ? (a * x - b).cwiseAbs().maxCoeff() : 0.0;
      const double dres = (a.transpose() * s.dual_eq + sv - c).cwiseAbs().maxCoeff();
      const double gap = std::abs(c.dot(x) - b.dot(s.dual_eq));
      return pres <= t.primal_residual * bnorm && dres <= t.dual_residual && gap <= t.gap && cone_ok(s.primal, 1.0) &&
             cone_ok(s.dual_psd, 1.0);
    }
    case SolveStatus::kInfeasible: {
      if (s.dual_eq.size() != a.rows()) return false;
      const double by = b.dot(s.dual_eq);
      if (!(by > 0)) return false;
      // -A^T y must lie in the cone; the tolerance is relative to b.y.
      const auto blocks = unpack(-a.transpose() * s.dual_eq, p.blocks);
      return cone_ok(blocks, by);
    }
    case SolveStatus::kUnbounded: {
      const Eigen::VectorXd x = pack(s.primal);
      const double cx = c.dot(x);
      if (!(cx < 0)) return false;
      const double ray = a.rows() ? (a * x).cwiseAbs().maxCoeff() : 0.0;
      return ray <= t.primal_residual * -cx && cone_ok(s.primal, -cx);
    }
    case SolveStatus::kNumericalFailure:
      return false;
  }
  return false;
}

void dump_program(const ConicProgram& p, std::ostream& out) {
  out << "sense " << (p.sense == Sense::kMinimize ? "min" : p.sense == Sense::kMaximize ? "max" : "feas") << '\n';
  out << "blocks " << p.blocks.size() << '\n';
  for (const auto& b : p.blocks) out << b.dim << (b.real ? " real" : " complex") << '\n';
  out.precision(17);
  out << "objective\n";
  for (Eigen::Index k = 0; k < p.objective.size(); ++k)
    if (p.objective(k) != 0) out << k << ' ' << p.objective(k) << '\n';
  out << "constraints " << p.rows.size() << '\n';
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    for (const auto& e : p.rows[i]) out << i << ' ' << e.col << ' ' << e.value << '\n';
    out << i << " rhs " << p.rhs[i] << '\n';
  }
}

}  // namespace steerkit
