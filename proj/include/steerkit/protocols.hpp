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

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "steerkit/correlation.hpp"
#include "steerkit/membership.hpp"

namespace steerkit {

/// An explicit local model shipped with a construction.
struct CanonicalModel {
  /// "universal-assemblage", "universal-behavior", "ghz" or "noisy-w-to".
  std::string kind;
  std::optional<Decomposition> lhs;
  std::optional<LhvDecomposition> lhv;
};

/// sigma_{a,b|x,y} = sigma_{b|x^a^y} / 2 for a binary single-box target, with
/// its two-bit hidden-variable LHS model. Wiring y = a returns the target.
std::pair<Assemblage, CanonicalModel> universal_initial_assemblage(const Assemblage& target);

/// P(a,b,c|x,y,z) = P(b,c|x^a^y, z) / 2 for a binary bipartite target, with an
/// LHV model across AB|C. Hidden variables of zero weight are omitted.
std::pair<Behavior, CanonicalModel> universal_initial_behavior(const Behavior& target);

/// The GHZ-derived two-box assemblage in closed form, with its LHS model.
std::pair<Assemblage, CanonicalModel> ghz_assemblage();

/// Same object from (|000> + |111>)/sqrt(2): Alice measures {I/2, I/2} (x=0)
/// or X (x=1), Bob measures (Z +- X)/sqrt(2).
Assemblage ghz_assemblage_from_state();

/// Measurement-basis parameter of the noisy-W example.
inline constexpr double kWEta = 0.97177;

/// v * sigma^W + (1 - v) * I/8 with sigma^W generated from the closed forms in eta.
Assemblage noisy_w_assemblage(double v);

/// W state measured by both boxes in eta X + sqrt(1-eta^2) Z (x=0) and
/// sqrt(1-eta^2) X - eta Z (x=1), outcome 0 on the +1 eigenvector.
Assemblage noisy_w_from_state(double v);

struct CanonicalWitnesses {
  /// Single-box steering witness, bounded by 1 on LHS.
  WitnessCertificate steering;
  /// Two-box NS-LHS witness, bounded by 0.
  WitnessCertificate ns_lhs;
};

CanonicalWitnesses canonical_witnesses();

/// The steering witness with the rounded constants c = 0.1382, q = 0.2236.
WitnessCertificate printed_steering_witness();

/// max |S| over the 8 sign variants of the CHSH combination of E(x, z), with
/// Charlie measuring the two observables (rescaled to unit spectrum).
double chsh_max(const Assemblage& a, const std::array<HermitianOperator, 2>& observables);

struct TableReport {
  double deviation_ab = 0;
  double deviation_ba = 0;
  double min_eigenvalue = 0;
  double trace_sum = 0;
  bool passed = false;
  /// TO_AtoB reading as a decomposition (weights Tr sigma_lambda).
  Decomposition decomposition_ab;
  Decomposition decomposition_ba;
};

/// The 64 printed hidden states of the time-ordered model of noisy-W(0.64),
/// recomposed in both time orders.
TableReport verify_to_lhs_table(double tolerance = 2e-3);

nlohmann::json to_json(const CanonicalModel& m);
nlohmann::json to_json(const TableReport& r);

}  // namespace steerkit
