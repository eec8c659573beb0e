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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steerkit/conic.hpp"
#include "steerkit/correlation.hpp"
#include "steerkit/strategies.hpp"
#include "steerkit/tolerances.hpp"

namespace steerkit {

/// sigma_{a|x} = sum_k weights[k] * strategies[k](a|x) * hidden_states[k].
struct Decomposition {
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::vector<Behavior> strategies;
  std::vector<HermitianOperator> hidden_states;
};

Assemblage recompose(const Decomposition& d, const Scenario& scenario);

struct DecompositionCheck {
  double weight_sum_error = 0;
  double worst_state_negativity = 0;
  double worst_state_trace_error = 0;
  double recomposition_error = 0;
  bool ok = false;
};

/// Weights sum to one, states are PSD with unit trace (within tol.equality),
/// recomposition within tol.decomposition.
DecompositionCheck check_decomposition(const Decomposition& d, const Assemblage& target,
                                       const Tolerances& tol = kDefaultTolerances);

/// P(ab..c|xy..z) = sum_k weights[k] * untrusted[k](ab..|xy..) * last[k](c|z).
struct LhvDecomposition {
  std::vector<std::string> labels;
  std::vector<double> weights;
  std::vector<Behavior> untrusted;
  std::vector<Behavior> last;
};

Behavior recompose(const LhvDecomposition& d, const Scenario& scenario);

/// Linear functional sigma -> sum_{a,x} Tr[F_{a|x} sigma_{a|x}]. For behaviors
/// the blocks are 1x1.
struct WitnessCertificate {
  Assemblage blocks;
  std::string model;
  double bound = 0;
  double value_on_target = 0;
  std::string normalization;
};

double evaluate_witness(const WitnessCertificate& w, const Assemblage& a);
double evaluate_witness(const WitnessCertificate& w, const Behavior& p);

struct ModelReport {
  std::string model;
  bool feasible = false;
  SolveStatus status = SolveStatus::kNumericalFailure;
  bool certificate_verified = false;
  double gap = 0;
  double primal_residual = 0;
  int iterations = 0;
  std::optional<Decomposition> decomposition;
  std::optional<LhvDecomposition> lhv_decomposition;
  std::optional<WitnessCertificate> witness;
  /// Per-order reports for to-lhs; per-term weights for gms.
  std::vector<ModelReport> sub_reports;
  std::vector<double> term_weights;
};

/// Hidden-state decomposition feasibility. TO_LHS runs the two time orders as
/// independent programs and is feasible iff both are.
ModelReport membership(const Assemblage& a, ModelClass c, const SolverSettings& settings = {});

/// Adds no-signaling equalities (trusted side and every untrusted party) on an
/// unnormalized assemblage held in `blocks`, flat index x * Na + a.
void add_no_signaling_constraints(ProgramBuilder& b, const Scenario& s, const std::vector<int>& blocks);

enum class NoiseMode { kMixed, kGeneralized };
std::string to_string(NoiseMode m);
NoiseMode noise_mode_from_string(const std::string& s);

struct RobustnessResult {
  double value = 0;
  NoiseMode mode = NoiseMode::kGeneralized;
  SolveStatus status = SolveStatus::kNumericalFailure;
  bool certificate_verified = false;
  double gap = 0;
  double dual_value = 0;
  /// Dual blocks F, with sum_lambda D_lambda F <= 0 on every strategy.
  std::optional<WitnessCertificate> witness;
};

/// Minimal r >= 0 with (sigma + r tau) / (1 + r) in the class; tau is the
/// maximally mixed assemblage (kMixed) or any valid assemblage (kGeneralized).
/// TO_LHS uses one noise term shared by both time-ordered decompositions.
RobustnessResult robustness(const Assemblage& a, ModelClass c, NoiseMode mode = NoiseMode::kGeneralized,
                            const SolverSettings& settings = {});

enum class ClassMaxRoute { kConic, kEigen };

/// max over normalized members of the class of the witness functional: per
/// strategy max Tr[G_lambda rho] (conic program or largest eigenvalue); TO_LHS
/// solves one joint program over both time orders.
double witness_class_max(const Assemblage& blocks, ModelClass c, ClassMaxRoute route = ClassMaxRoute::kConic);

/// Shifts F by t I / N_x so that the class maximum is exactly `bound`.
WitnessCertificate normalize_witness(const Assemblage& blocks, ModelClass c, const Assemblage& target,
                                     double bound = 0.0);

/// Dual-derived witness of generalized robustness, normalized to class max 0.
/// Throws InvalidInput if the assemblage is a member.
WitnessCertificate optimal_witness(const Assemblage& a, ModelClass c, const SolverSettings& settings = {});

struct GmsOptions {
  /// Include the A|BC and B|AC terms; off leaves only the time-ordered term.
  bool bipartition_terms = true;
};

/// Biseparable decomposition of a two-black-box assemblage: A|BC + B|AC +
/// a term admitting both time-ordered decompositions.
ModelReport gms_membership(const Assemblage& a, const GmsOptions& options = {},
                           const SolverSettings& settings = {});

/// LP over (class strategy on the first n-1 parties) x (deterministic last party).
ModelReport behavior_membership(const Behavior& p, ModelClass c, const SolverSettings& settings = {});

nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const LhvDecomposition& d);
nlohmann::json to_json(const WitnessCertificate& w);
nlohmann::json to_json(const ModelReport& r);
nlohmann::json to_json(const RobustnessResult& r);
WitnessCertificate witness_from_json(const nlohmann::json& j, const std::string& at = "");

}  // namespace steerkit
