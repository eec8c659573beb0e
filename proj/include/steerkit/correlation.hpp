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

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "steerkit/error.hpp"
#include "steerkit/hermitian.hpp"
#include "steerkit/tolerances.hpp"

namespace steerkit {

/// Party layout. Tuples of inputs or outcomes are little-endian multi-indices
/// (party 0 varies fastest).
struct Scenario {
  int n_untrusted = 0;
  std::vector<int> inputs_per_party;
  std::vector<int> outputs_per_party;
  int trusted_dim = 0;

  static Scenario binary(int n_untrusted, int trusted_dim);

  /// Throws DimensionError when the fields are inconsistent.
  void check() const;

  std::size_t num_input_tuples() const;
  std::size_t num_outcome_tuples() const;

  std::size_t input_index(const std::vector<int>& x) const;
  std::size_t outcome_index(const std::vector<int>& a) const;
  std::vector<int> input_tuple(std::size_t index) const;
  std::vector<int> outcome_tuple(std::size_t index) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::size_t encode_multi_index(const std::vector<int>& tuple, const std::vector<int>& cards);
std::vector<int> decode_multi_index(std::size_t index, const std::vector<int>& cards);
std::size_t product_of(const std::vector<int>& cards);

/// Dense table payload[x][a]; the flat storage order is inputs outer, outcomes
/// inner, which is also the serialization order.
template <typename Payload>
class CorrelationTable {
 public:
  CorrelationTable() = default;
  CorrelationTable(Scenario scenario, Payload fill) : scenario_(std::move(scenario)) {
    scenario_.check();
    elements_.assign(scenario_.num_input_tuples() * scenario_.num_outcome_tuples(), fill);
  }

  const Scenario& scenario() const { return scenario_; }
  std::size_t num_inputs() const { return scenario_.num_input_tuples(); }
  std::size_t num_outcomes() const { return scenario_.num_outcome_tuples(); }

  Payload& at(std::size_t a, std::size_t x) { return elements_[x * num_outcomes() + a]; }
  const Payload& at(std::size_t a, std::size_t x) const { return elements_[x * num_outcomes() + a]; }
  Payload& at(const std::vector<int>& a, const std::vector<int>& x) {
    return at(scenario_.outcome_index(a), scenario_.input_index(x));
  }
  const Payload& at(const std::vector<int>& a, const std::vector<int>& x) const {
    return at(scenario_.outcome_index(a), scenario_.input_index(x));
  }

  Payload& at(std::initializer_list<int> a, std::initializer_list<int> x) {
    return at(std::vector<int>(a), std::vector<int>(x));
  }
  const Payload& at(std::initializer_list<int> a, std::initializer_list<int> x) const {
    return at(std::vector<int>(a), std::vector<int>(x));
  }

  std::vector<Payload>& elements() { return elements_; }
  const std::vector<Payload>& elements() const { return elements_; }

 private:
  Scenario scenario_;
  std::vector<Payload> elements_;
};

using Assemblage = CorrelationTable<HermitianOperator>;
using Behavior = CorrelationTable<double>;

Assemblage make_assemblage(const Scenario& scenario);
Behavior make_behavior(const Scenario& scenario);

/// Entrywise operations on same-scenario tables.
Assemblage mix(const Assemblage& a1, const Assemblage& a2, double weight1);
Behavior mix(const Behavior& p1, const Behavior& p2, double weight1);
double max_abs_difference(const Assemblage& a1, const Assemblage& a2);
double max_abs_difference(const Behavior& p1, const Behavior& p2);

/// Uniform outcomes with every conditional state I/d.
Assemblage maximally_mixed_assemblage(const Scenario& scenario);

/// Conditional state sigma / Tr sigma. Throws InvalidInput on a zero element.
HermitianOperator conditional_state(const HermitianOperator& element, double tol = 1e-12);

enum class ViolationKind { kNegativity, kNormalization, kTrustedSignaling, kPartySignaling };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Party index for kPartySignaling, -1 otherwise.
  int party = -1;
  double magnitude = 0;
};

struct ValidationReport {
  double tolerance = 0;
  /// Largest deviation seen per invariant; only entries above tolerance are listed.
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  double magnitude(ViolationKind kind) const;
};

ValidationReport validate(const Assemblage& a, double tol = kDefaultTolerances.equality);
ValidationReport validate(const Behavior& p, double tol = kDefaultTolerances.equality);

/// Classical wiring of the first `ordering.size()` untrusted parties into a
/// smaller set of final parties. Parties are queried in `ordering`; the input of
/// the party at position k is input_maps[k][X * E_k + e], where X is the final
/// input tuple index and e indexes the outcomes of ordering[0..k-1] (little-endian
/// in ordering order), E_k the number of such outcome tuples. output_map takes
/// the outcome tuple of the wired parties (original party order) to the final
/// outcome tuple index. Behavior parties beyond the wired ones are appended
/// unchanged after the final parties.
struct Wiring {
  std::vector<int> ordering;
  std::vector<int> final_inputs;
  std::vector<int> final_outputs;
  std::vector<std::vector<int>> input_maps;
  std::vector<int> output_map;

  /// Throws DimensionError if the tables do not fit `scenario`.
  void check(const Scenario& scenario) const;

  /// Bipartite to single box: Bob's input is Alice's outcome, output is Bob's.
  static Wiring y_equals_a();
  static Wiring identity(const Scenario& scenario);
};

Assemblage apply_wiring(const Assemblage& a, const Wiring& w);
Behavior apply_wiring_behavior(const Behavior& p, const Wiring& w);

/// P(a, c | x, z) = Tr[sigma_{a|x} M_{c|z}]; the trusted party becomes the last
/// party of the behavior. measurements[z][c] are POVM effects.
Behavior behavior_from_assemblage(const Assemblage& a,
                                  const std::vector<std::vector<HermitianOperator>>& measurements,
                                  double tol = 1e-9);

/// Two-outcome projective measurement of a +-1 observable; effect 0 is the +1 eigenspace.
std::vector<HermitianOperator> observable_povm(const HermitianOperator& observable);

double assemblage_fidelity(const Assemblage& a1, const Assemblage& a2);

}  // namespace steerkit
