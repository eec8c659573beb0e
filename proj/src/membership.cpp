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

#include "steerkit/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steerkit/error.hpp"
#include "steerkit/io.hpp"

namespace steerkit {

namespace {

using MatrixTerm = ProgramBuilder::MatrixTerm;

/// Terms below this weight are dropped from reported decompositions.
constexpr double kNegligibleWeight = 1e-13;

struct Family {
  const std::vector<Strategy>* strategies = nullptr;
  std::vector<int> blocks;
};

Family add_family(ProgramBuilder& b, const std::vector<Strategy>& strategies, int d) {
  Family f;
  f.strategies = &strategies;
  for (std::size_t k = 0; k < strategies.size(); ++k) f.blocks.push_back(b.add_block(d));
  return f;
}

void append_family_terms(std::vector<MatrixTerm>& terms, const Family& f, std::size_t a, std::size_t x,
                         double sign = 1.0) {
  for (std::size_t k = 0; k < f.blocks.size(); ++k) {
    const double p = (*f.strategies)[k].behavior.at(a, x);
    if (p != 0) terms.push_back({f.blocks[k], sign * p, nullptr});
  }
}

/// Element-wise equality rows; returns the first row of each element (flat index x * Na + a).
template <typename Extra>
std::vector<int> add_element_equalities(ProgramBuilder& b, const Assemblage& target, const Family& f,
                                        Extra&& extra_terms) {
  std::vector<int> rows(target.elements().size());
  for (std::size_t x = 0; x < target.num_inputs(); ++x)
    for (std::size_t a = 0; a < target.num_outcomes(); ++a) {
      std::vector<MatrixTerm> terms;
      append_family_terms(terms, f, a, x);
      extra_terms(terms, a, x);
      rows[x * target.num_outcomes() + a] = b.add_matrix_equality(terms, target.at(a, x));
    }
  return rows;
}

Assemblage dual_blocks(const ConicSolution& s, const std::vector<int>& rows, const Scenario& scenario) {
  Assemblage f = make_assemblage(scenario);
  const int d = scenario.trusted_dim;
  for (std::size_t i = 0; i < rows.size(); ++i)
    f.elements()[i] = HermitianOperator::from_matrix(smat(s.dual_eq.segment(rows[i], d * d), d));
  return f;
}

Decomposition extract_decomposition(const ConicSolution& s, const Family& f) {
  Decomposition d;
  for (std::size_t k = 0; k < f.blocks.size(); ++k) {
    const auto& sigma = s.primal[static_cast<std::size_t>(f.blocks[k])];
    const double w = sigma.trace();
    if (w <= kNegligibleWeight) continue;
    d.labels.push_back((*f.strategies)[k].label);
    d.weights.push_back(w);
    d.strategies.push_back((*f.strategies)[k].behavior);
    d.hidden_states.push_back(sigma / w);
  }
  return d;
}

void fill_status(ModelReport& r, const ConicProgram& p, const ConicSolution& s) {
  r.status = s.status;
  r.certificate_verified = verify_certificate(p, s);
  // The duality gap is only meaningful for an optimal pair; a Farkas ray carries none.
  r.gap = s.status == SolveStatus::kOptimal ? s.gap : 0.0;
  r.primal_residual = s.primal_residual;
  r.iterations = s.iterations;
  r.feasible = s.status == SolveStatus::kOptimal;
}

ModelReport single_membership(const Assemblage& a, ModelClass c, const SolverSettings& settings) {
  const auto strategies = enumerate_strategies(c, a.scenario());
  ProgramBuilder b;
  const Family f = add_family(b, strategies, a.scenario().trusted_dim);
  const auto rows = add_element_equalities(b, a, f, [](auto&, std::size_t, std::size_t) {});
  const ConicProgram p = b.build();
  const ConicSolution s = solve(p, settings);
  ModelReport r;
  r.model = to_string(c);
  fill_status(r, p, s);
  if (s.status == SolveStatus::kOptimal) {
    r.decomposition = extract_decomposition(s, f);
  } else if (s.status == SolveStatus::kInfeasible) {
    WitnessCertificate w = normalize_witness(dual_blocks(s, rows, a.scenario()), c, a, 0.0);
    r.witness = std::move(w);
  }
  return r;
}

}  // namespace

Assemblage recompose(const Decomposition& d, const Scenario& scenario) {
  Assemblage out = make_assemblage(scenario);
  for (std::size_t k = 0; k < d.weights.size(); ++k)
    for (std::size_t x = 0; x < out.num_inputs(); ++x)
      for (std::size_t a = 0; a < out.num_outcomes(); ++a) {
        const double p = d.strategies[k].at(a, x);
        if (p != 0) out.at(a, x) += (d.weights[k] * p) * d.hidden_states[k];
      }
  return out;
}

DecompositionCheck check_decomposition(const Decomposition& d, const Assemblage& target, const Tolerances& tol) {
  DecompositionCheck c;
  double total = 0;
  for (double w : d.weights) total += w;
  c.weight_sum_error = std::abs(total - 1);
  bool weights_ok = std::all_of(d.weights.begin(), d.weights.end(), [](double w) { return w >= 0; });
  for (const auto& rho : d.hidden_states) {
    c.worst_state_negativity = std::max(c.worst_state_negativity, -min_eigenvalue(rho));
    c.worst_state_trace_error = std::max(c.worst_state_trace_error, std::abs(rho.trace() - 1));
  }
  // Strategies may signal (LHS, time-ordered); only positivity and normalization apply.
  for (const auto& s : d.strategies) {
    const auto report = validate(s, tol.equality);
    if (report.magnitude(ViolationKind::kNegativity) > 0 || report.magnitude(ViolationKind::kNormalization) > 0)
      weights_ok = false;
  }
  c.recomposition_error = max_abs_difference(recompose(d, target.scenario()), target);
  c.ok = weights_ok && c.weight_sum_error <= tol.equality && c.worst_state_negativity <= tol.equality &&
         c.worst_state_trace_error <= tol.equality && c.recomposition_error <= tol.decomposition;
  return c;
}

Behavior recompose(const LhvDecomposition& d, const Scenario& scenario) {
  Behavior out = make_behavior(scenario);
  const Scenario& s = out.scenario();
  for (std::size_t k = 0; k < d.weights.size(); ++k)
    for (std::size_t xi = 0; xi < out.num_inputs(); ++xi)
      for (std::size_t ai = 0; ai < out.num_outcomes(); ++ai) {
        auto x = s.input_tuple(xi), a = s.outcome_tuple(ai);
        const int z = x.back(), c = a.back();
        x.pop_back();
        a.pop_back();
        out.at(ai, xi) += d.weights[k] * d.untrusted[k].at(a, x) * d.last[k].at({c}, {z});
      }
  return out;
}

double evaluate_witness(const WitnessCertificate& w, const Assemblage& a) {
  if (!(w.blocks.scenario() == a.scenario())) throw DimensionError("witness shape does not match the assemblage");
  double v = 0;
  for (std::size_t i = 0; i < a.elements().size(); ++i) v += trace_product(w.blocks.elements()[i], a.elements()[i]);
  return v;
}

double evaluate_witness(const WitnessCertificate& w, const Behavior& p) {
  const Scenario& s = w.blocks.scenario();
  if (s.trusted_dim != 1 || s.inputs_per_party != p.scenario().inputs_per_party ||
      s.outputs_per_party != p.scenario().outputs_per_party)
    throw DimensionError("witness shape does not match the behavior");
  double v = 0;
  for (std::size_t i = 0; i < p.elements().size(); ++i) v += w.blocks.elements()[i](0, 0).real() * p.elements()[i];
  return v;
}

ModelReport membership(const Assemblage& a, ModelClass c, const SolverSettings& settings) {
  if (c != ModelClass::kTOLHS || a.scenario().n_untrusted == 1) {
    ModelReport r = single_membership(a, c == ModelClass::kTOLHS ? ModelClass::kLHS : c, settings);
    r.model = to_string(c);
    return r;
  }
  ModelReport r;
  r.model = to_string(c);
  r.sub_reports.push_back(single_membership(a, ModelClass::kTOAtoB, settings));
  r.sub_reports.push_back(single_membership(a, ModelClass::kTOBtoA, settings));
  r.feasible = r.sub_reports[0].feasible && r.sub_reports[1].feasible;
  r.certificate_verified = r.sub_reports[0].certificate_verified && r.sub_reports[1].certificate_verified;
  r.status = SolveStatus::kOptimal;
  for (const auto& sub : r.sub_reports) {
    if (sub.status == SolveStatus::kNumericalFailure) r.status = SolveStatus::kNumericalFailure;
    r.gap = std::max(r.gap, sub.gap);
    r.primal_residual = std::max(r.primal_residual, sub.primal_residual);
    r.iterations += sub.iterations;
  }
  if (r.status != SolveStatus::kNumericalFailure && !r.feasible) r.status = SolveStatus::kInfeasible;
  for (const auto& sub : r.sub_reports)
    if (!sub.feasible && sub.witness && !r.witness) r.witness = sub.witness;
  return r;
}

std::string to_string(NoiseMode m) { return m == NoiseMode::kMixed ? "mixed" : "generalized"; }

NoiseMode noise_mode_from_string(const std::string& s) {
  if (s == "mixed") return NoiseMode::kMixed;
  if (s == "generalized") return NoiseMode::kGeneralized;
  throw InvalidInput("unknown robustness mode '" + s + "'");
}

namespace {

std::vector<std::vector<Strategy>> class_families(ModelClass c, const Scenario& s) {
  if (c == ModelClass::kTOLHS && s.n_untrusted > 1)
    return {enumerate_strategies(ModelClass::kTOAtoB, s), enumerate_strategies(ModelClass::kTOBtoA, s)};
  return {enumerate_strategies(c == ModelClass::kTOLHS ? ModelClass::kLHS : c, s)};
}

}  // namespace

void add_no_signaling_constraints(ProgramBuilder& b, const Scenario& s, const std::vector<int>& blocks) {
  const std::size_t na = s.num_outcome_tuples(), nx = s.num_input_tuples();
  const HermitianOperator zero = HermitianOperator::zero(s.trusted_dim);
  for (std::size_t x = 1; x < nx; ++x) {
    std::vector<MatrixTerm> terms;
    for (std::size_t a = 0; a < na; ++a) {
      terms.push_back({blocks[x * na + a], 1.0, nullptr});
      terms.push_back({blocks[a], -1.0, nullptr});
    }
    b.add_matrix_equality(terms, zero);
  }
  for (int k = 0; k < s.n_untrusted; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (std::size_t xi = 0; xi < nx; ++xi) {
      auto x = s.input_tuple(xi);
      if (x[ku] != 0) continue;
      for (std::size_t ai = 0; ai < na; ++ai) {
        auto a = s.outcome_tuple(ai);
        if (a[ku] != 0) continue;
        for (int xk = 1; xk < s.inputs_per_party[ku]; ++xk) {
          std::vector<MatrixTerm> terms;
          for (int ak = 0; ak < s.outputs_per_party[ku]; ++ak) {
            auto aa = a, xx = x;
            aa[ku] = ak;
            terms.push_back({blocks[xi * na + s.outcome_index(aa)], -1.0, nullptr});
            xx[ku] = xk;
            terms.push_back({blocks[s.input_index(xx) * na + s.outcome_index(aa)], 1.0, nullptr});
          }
          b.add_matrix_equality(terms, zero);
        }
      }
    }
  }
}

RobustnessResult robustness(const Assemblage& a, ModelClass c, NoiseMode mode, const SolverSettings& settings) {
  const Scenario& s = a.scenario();
  const int d = s.trusted_dim;
  const auto families = class_families(c, s);
  ProgramBuilder b;
  std::vector<Family> fams;
  for (const auto& st : families) fams.push_back(add_family(b, st, d));

  const HermitianOperator mixed_shape =
      HermitianOperator::identity(d) / (static_cast<double>(d) * static_cast<double>(a.num_outcomes()));
  int r_block = -1;
  std::vector<int> noise_blocks;
  if (mode == NoiseMode::kMixed) {
    r_block = b.add_block(1);
    b.add_objective_coefficient(r_block, 0, 1.0);
  } else {
    for (std::size_t i = 0; i < a.elements().size(); ++i) noise_blocks.push_back(b.add_block(d));
    add_no_signaling_constraints(b, s, noise_blocks);
    for (std::size_t o = 0; o < a.num_outcomes(); ++o)
      b.add_objective(noise_blocks[o], HermitianOperator::identity(d));
  }
  b.set_sense(Sense::kMinimize);

  std::vector<std::vector<int>> rows;
  for (const auto& f : fams) {
    rows.push_back(add_element_equalities(b, a, f, [&](std::vector<MatrixTerm>& terms, std::size_t o, std::size_t x) {
      if (mode == NoiseMode::kMixed)
        terms.push_back({r_block, -1.0, &mixed_shape});
      else
        terms.push_back({noise_blocks[x * a.num_outcomes() + o], -1.0, nullptr});
    }));
  }
  const ConicProgram p = b.build();
  const ConicSolution sol = solve(p, settings);

  RobustnessResult r;
  r.mode = mode;
  r.status = sol.status;
  r.certificate_verified = verify_certificate(p, sol);
  r.gap = sol.gap;
  if (sol.status == SolveStatus::kOptimal) {
    r.value = std::max(0.0, sol.objective_value);
    r.dual_value = sol.dual_objective;
    Assemblage f = dual_blocks(sol, rows[0], s);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const Assemblage g = dual_blocks(sol, rows[k], s);
      for (std::size_t i = 0; i < f.elements().size(); ++i) f.elements()[i] += g.elements()[i];
    }
    WitnessCertificate w;
    w.blocks = std::move(f);
    w.model = to_string(c);
    w.bound = 0;
    w.value_on_target = evaluate_witness(w, a);
    w.normalization = "dual";
    r.witness = std::move(w);
  }
  return r;
}

double witness_class_max(const Assemblage& blocks, ModelClass c, ClassMaxRoute route) {
  const Scenario& s = blocks.scenario();
  const int d = s.trusted_dim;
  if (c == ModelClass::kTOLHS && s.n_untrusted > 1) {
    const auto ab = enumerate_strategies(ModelClass::kTOAtoB, s);
    const auto ba = enumerate_strategies(ModelClass::kTOBtoA, s);
    ProgramBuilder b;
    const Family fa = add_family(b, ab, d), fb = add_family(b, ba, d);
    const HermitianOperator zero = HermitianOperator::zero(d);
    for (std::size_t x = 0; x < blocks.num_inputs(); ++x)
      for (std::size_t o = 0; o < blocks.num_outcomes(); ++o) {
        std::vector<MatrixTerm> terms;
        append_family_terms(terms, fa, o, x);
        append_family_terms(terms, fb, o, x, -1.0);
        b.add_matrix_equality(terms, zero);
      }
    const int norm = b.add_row(1.0);
    for (int blk : fa.blocks) b.add_trace_term(norm, blk, HermitianOperator::identity(d));
    for (std::size_t k = 0; k < ab.size(); ++k) {
      HermitianOperator g = HermitianOperator::zero(d);
      for (std::size_t x = 0; x < blocks.num_inputs(); ++x)
        for (std::size_t o = 0; o < blocks.num_outcomes(); ++o) g += ab[k].behavior.at(o, x) * blocks.at(o, x);
      b.add_objective(fa.blocks[k], g);
    }
    b.set_sense(Sense::kMaximize);
    const auto sol = solve(b.build());
    if (sol.status != SolveStatus::kOptimal) throw SolverFailure("witness maximization over to-lhs failed");
    return sol.objective_value;
  }
  const auto strategies = enumerate_strategies(c, s);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& st : strategies) {
    HermitianOperator g = HermitianOperator::zero(d);
    for (std::size_t x = 0; x < blocks.num_inputs(); ++x)
      for (std::size_t o = 0; o < blocks.num_outcomes(); ++o)
        if (st.behavior.at(o, x) != 0) g += st.behavior.at(o, x) * blocks.at(o, x);
    if (route == ClassMaxRoute::kEigen) {
      best = std::max(best, max_eigenvalue(g));
      continue;
    }
    ProgramBuilder b;
    const int rho = b.add_block(d);
    b.add_trace_term(b.add_row(1.0), rho, HermitianOperator::identity(d));
    b.add_objective(rho, g);
    b.set_sense(Sense::kMaximize);
    const auto sol = solve(b.build());
    if (sol.status != SolveStatus::kOptimal) throw SolverFailure("witness maximization over a strategy failed");
    best = std::max(best, sol.objective_value);
  }
  return best;
}

WitnessCertificate normalize_witness(const Assemblage& blocks, ModelClass c, const Assemblage& target, double bound) {
  const double m = witness_class_max(blocks, c);
  const double shift = (bound - m) / static_cast<double>(blocks.num_inputs());
  WitnessCertificate w;
  w.blocks = blocks;
  for (auto& f : w.blocks.elements()) f += shift * HermitianOperator::identity(f.dim());
  w.model = to_string(c);
  w.bound = bound;
  w.value_on_target = evaluate_witness(w, target);
  w.normalization = "class-max";
  return w;
}

WitnessCertificate optimal_witness(const Assemblage& a, ModelClass c, const SolverSettings& settings) {
  const auto r = robustness(a, c, NoiseMode::kGeneralized, settings);
  if (r.status != SolveStatus::kOptimal) throw SolverFailure("robustness program did not converge: " + to_string(r.status));
  if (r.value <= kDefaultTolerances.robustness_zero)
    throw InvalidInput("assemblage is a member of " + to_string(c) + "; no violating witness exists");
  return normalize_witness(r.witness->blocks, c, a, 0.0);
}

ModelReport gms_membership(const Assemblage& a, const GmsOptions& options, const SolverSettings& settings) {
  const Scenario& s = a.scenario();
  if (s.n_untrusted != 2 || s.inputs_per_party != std::vector<int>{2, 2} || s.outputs_per_party != std::vector<int>{2, 2})
    throw InvalidInput("gms membership expects two binary black boxes and a trusted system");
  const int d = s.trusted_dim;
  const auto ab = enumerate_strategies(ModelClass::kTOAtoB, s);
  const auto ba = enumerate_strategies(ModelClass::kTOBtoA, s);
  ProgramBuilder b;
  const Family fa = add_family(b, ab, d), fb = add_family(b, ba, d);
  const HermitianOperator zero = HermitianOperator::zero(d);

  // A|BC: a = f(x) with an unnormalized one-box assemblage omega^f_{b|y};
  // B|AC mirrored. Block index [f][y * 2 + b].
  std::vector<std::vector<int>> alice_split, bob_split;
  if (options.bipartition_terms) {
    for (auto* split : {&alice_split, &bob_split}) {
      for (int f = 0; f < 4; ++f) {
        std::vector<int> blocks;
        for (int k = 0; k < 4; ++k) blocks.push_back(b.add_block(d));
        b.add_matrix_equality({{blocks[2], 1.0, nullptr}, {blocks[3], 1.0, nullptr},
                               {blocks[0], -1.0, nullptr}, {blocks[1], -1.0, nullptr}},
                              zero);
        split->push_back(blocks);
      }
    }
  }
  std::vector<int> rows;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int oa = 0; oa < 2; ++oa)
        for (int ob = 0; ob < 2; ++ob) {
          const std::size_t ai = s.outcome_index({oa, ob}), xi = s.input_index({x, y});
          std::vector<MatrixTerm> terms;
          append_family_terms(terms, fa, ai, xi);
          for (int f = 0; f < 4 && options.bipartition_terms; ++f) {
            // f encodes (f(0), f(1)) as f(0) * 2 + f(1).
            const int fa_out = x == 0 ? f >> 1 : f & 1;
            if (fa_out == oa) terms.push_back({alice_split[static_cast<std::size_t>(f)][static_cast<std::size_t>(y * 2 + ob)], 1.0, nullptr});
            const int fb_out = y == 0 ? f >> 1 : f & 1;
            if (fb_out == ob) terms.push_back({bob_split[static_cast<std::size_t>(f)][static_cast<std::size_t>(x * 2 + oa)], 1.0, nullptr});
          }
          rows.push_back(b.add_matrix_equality(terms, a.at(ai, xi)));
        }
  // Both time-ordered expansions describe the same term.
  for (std::size_t x = 0; x < a.num_inputs(); ++x)
    for (std::size_t o = 0; o < a.num_outcomes(); ++o) {
      std::vector<MatrixTerm> terms;
      append_family_terms(terms, fa, o, x);
      append_family_terms(terms, fb, o, x, -1.0);
      b.add_matrix_equality(terms, zero);
    }
  const ConicProgram p = b.build();
  const ConicSolution sol = solve(p, settings);
  ModelReport r;
  r.model = options.bipartition_terms ? "gms" : "gms-to-lhs-term";
  fill_status(r, p, sol);
  if (sol.status == SolveStatus::kOptimal) {
    auto mass = [&](const std::vector<std::vector<int>>& split) {
      double m = 0;
      for (const auto& blocks : split) m += sol.primal[static_cast<std::size_t>(blocks[0])].trace() +
                                            sol.primal[static_cast<std::size_t>(blocks[1])].trace();
      return m;
    };
    double third = 0;
    for (int blk : fa.blocks) third += sol.primal[static_cast<std::size_t>(blk)].trace();
    r.term_weights = {mass(alice_split), mass(bob_split), third};
    r.decomposition = extract_decomposition(sol, fa);
  } else if (sol.status == SolveStatus::kInfeasible) {
    // Rows were added in (x, y, a, b) loop order; map back to flat indices.
    std::vector<int> flat(a.elements().size());
    std::size_t k = 0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int oa = 0; oa < 2; ++oa)
          for (int ob = 0; ob < 2; ++ob)
            flat[s.input_index({x, y}) * a.num_outcomes() + s.outcome_index({oa, ob})] = rows[k++];
    WitnessCertificate w;
    w.blocks = dual_blocks(sol, flat, s);
    w.model = r.model;
    w.bound = 0;
    w.value_on_target = evaluate_witness(w, a);
    w.normalization = "farkas";
    r.witness = std::move(w);
  }
  return r;
}

namespace {

ModelReport single_behavior_membership(const Behavior& p, ModelClass c, const SolverSettings& settings) {
  const Scenario& s = p.scenario();
  Scenario head;
  head.n_untrusted = s.n_untrusted - 1;
  head.inputs_per_party.assign(s.inputs_per_party.begin(), s.inputs_per_party.end() - 1);
  head.outputs_per_party.assign(s.outputs_per_party.begin(), s.outputs_per_party.end() - 1);
  Scenario tail;
  tail.n_untrusted = 1;
  tail.inputs_per_party = {s.inputs_per_party.back()};
  tail.outputs_per_party = {s.outputs_per_party.back()};
  const auto heads = enumerate_strategies(c, head);
  const auto tails = enumerate_strategies(ModelClass::kLHS, tail);

  ProgramBuilder b;
  std::vector<int> vars;
  for (std::size_t i = 0; i < heads.size() * tails.size(); ++i) vars.push_back(b.add_block(1, true));
  std::vector<int> rows(p.elements().size());
  for (std::size_t xi = 0; xi < p.num_inputs(); ++xi)
    for (std::size_t ai = 0; ai < p.num_outcomes(); ++ai) {
      auto x = s.input_tuple(xi), a = s.outcome_tuple(ai);
      const int z = x.back(), cc = a.back();
      x.pop_back();
      a.pop_back();
      const int row = b.add_row(p.at(ai, xi));
      rows[xi * p.num_outcomes() + ai] = row;
      for (std::size_t h = 0; h < heads.size(); ++h) {
        const double ph = heads[h].behavior.at(a, x);
        if (ph == 0) continue;
        for (std::size_t t = 0; t < tails.size(); ++t) {
          const double pt = tails[t].behavior.at({cc}, {z});
          if (pt != 0) b.add_coefficient(row, vars[h * tails.size() + t], 0, ph * pt);
        }
      }
    }
  const ConicProgram prog = b.build();
  const ConicSolution sol = solve(prog, settings);
  ModelReport r;
  r.model = "lhv:" + to_string(c);
  fill_status(r, prog, sol);
  if (sol.status == SolveStatus::kOptimal) {
    LhvDecomposition d;
    for (std::size_t h = 0; h < heads.size(); ++h)
      for (std::size_t t = 0; t < tails.size(); ++t) {
        const double w = sol.primal[static_cast<std::size_t>(vars[h * tails.size() + t])](0, 0).real();
        if (w <= kNegligibleWeight) continue;
        d.labels.push_back(heads[h].label + "|" + tails[t].label);
        d.weights.push_back(w);
        d.untrusted.push_back(heads[h].behavior);
        d.last.push_back(tails[t].behavior);
      }
    r.lhv_decomposition = std::move(d);
  } else if (sol.status == SolveStatus::kInfeasible) {
    Scenario ws = s;
    ws.trusted_dim = 1;
    WitnessCertificate w;
    w.blocks = make_assemblage(ws);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = sol.dual_eq(rows[i]);
      w.blocks.elements()[i] = HermitianOperator::from_matrix(m);
    }
    w.model = r.model;
    w.bound = 0;
    w.value_on_target = evaluate_witness(w, p);
    w.normalization = "farkas";
    r.witness = std::move(w);
  }
  return r;
}

}  // namespace

ModelReport behavior_membership(const Behavior& p, ModelClass c, const SolverSettings& settings) {
  if (p.scenario().n_untrusted < 2) throw InvalidInput("behavior membership needs at least two parties");
  if (c != ModelClass::kTOLHS || p.scenario().n_untrusted != 3) {
    return single_behavior_membership(p, c == ModelClass::kTOLHS ? ModelClass::kLHS : c, settings);
  }
  ModelReport r;
  r.model = "lhv:" + to_string(c);
  r.sub_reports.push_back(single_behavior_membership(p, ModelClass::kTOAtoB, settings));
  r.sub_reports.push_back(single_behavior_membership(p, ModelClass::kTOBtoA, settings));
  r.feasible = r.sub_reports[0].feasible && r.sub_reports[1].feasible;
  r.certificate_verified = r.sub_reports[0].certificate_verified && r.sub_reports[1].certificate_verified;
  r.status = r.feasible ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
  for (const auto& sub : r.sub_reports)
    if (!sub.feasible && sub.witness && !r.witness) r.witness = sub.witness;
  return r;
}

nlohmann::json to_json(const Decomposition& d) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t k = 0; k < d.weights.size(); ++k)
    terms.push_back({{"label", d.labels[k]},
                     {"weight", d.weights[k]},
                     {"strategy", io::to_json(d.strategies[k])},
                     {"state", io::to_json(d.hidden_states[k])}});
  return {{"terms", terms}};
}

nlohmann::json to_json(const LhvDecomposition& d) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t k = 0; k < d.weights.size(); ++k)
    terms.push_back({{"label", d.labels[k]},
                     {"weight", d.weights[k]},
                     {"untrusted", io::to_json(d.untrusted[k])},
                     {"last", io::to_json(d.last[k])}});
  return {{"terms", terms}};
}

nlohmann::json to_json(const WitnessCertificate& w) {
  nlohmann::json j = io::to_json(w.blocks);
  j["model"] = w.model;
  j["bound"] = w.bound;
  j["value_on_target"] = w.value_on_target;
  j["normalization"] = w.normalization;
  return j;
}

WitnessCertificate witness_from_json(const nlohmann::json& j, const std::string& at) {
  WitnessCertificate w;
  w.blocks = io::assemblage_from_json(j, at);
  w.model = j.value("model", "");
  if (j.contains("bound")) {
    if (!j["bound"].is_number()) throw ParseError(at + "/bound", "expected a number");
    w.bound = j["bound"].get<double>();
  }
  w.value_on_target = j.value("value_on_target", 0.0);
  w.normalization = j.value("normalization", "");
  return w;
}

nlohmann::json to_json(const ModelReport& r) {
  nlohmann::json j = {{"model", r.model},
                      {"feasible", r.feasible},
                      {"status", to_string(r.status)},
                      {"certificate_verified", r.certificate_verified},
                      {"gap", r.gap},
                      {"primal_residual", r.primal_residual},
                      {"iterations", r.iterations}};
  if (r.decomposition) j["decomposition"] = to_json(*r.decomposition);
  if (r.lhv_decomposition) j["lhv_decomposition"] = to_json(*r.lhv_decomposition);
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (!r.term_weights.empty()) j["term_weights"] = r.term_weights;
  if (!r.sub_reports.empty()) {
    j["sub_reports"] = nlohmann::json::array();
    for (const auto& s : r.sub_reports) j["sub_reports"].push_back(to_json(s));
  }
  return j;
}

nlohmann::json to_json(const RobustnessResult& r) {
  nlohmann::json j = {{"value", r.value},
                      {"mode", to_string(r.mode)},
                      {"status", to_string(r.status)},
                      {"certificate_verified", r.certificate_verified},
                      {"gap", r.gap},
                      {"dual_value", r.dual_value}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

}  // namespace steerkit
