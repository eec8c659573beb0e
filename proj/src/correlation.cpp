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

#include "steerkit/correlation.hpp"

#include <algorithm>
#include <cmath>

namespace steerkit {

Scenario Scenario::binary(int n_untrusted, int trusted_dim) {
  Scenario s;
  s.n_untrusted = n_untrusted;
  s.inputs_per_party.assign(static_cast<std::size_t>(n_untrusted), 2);
  s.outputs_per_party.assign(static_cast<std::size_t>(n_untrusted), 2);
  s.trusted_dim = trusted_dim;
  return s;
}

void Scenario::check() const {
  if (n_untrusted < 1) throw DimensionError("scenario needs at least one untrusted party");
  if (inputs_per_party.size() != static_cast<std::size_t>(n_untrusted) ||
      outputs_per_party.size() != static_cast<std::size_t>(n_untrusted)) {
    throw DimensionError("scenario cardinality lists must have n_untrusted entries");
  }
  for (int c : inputs_per_party)
    if (c < 1) throw DimensionError("input cardinalities must be >= 1");
  for (int c : outputs_per_party)
    if (c < 1) throw DimensionError("output cardinalities must be >= 1");
  if (trusted_dim < 0) throw DimensionError("trusted_dim must be >= 0");
}

std::size_t product_of(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

std::size_t encode_multi_index(const std::vector<int>& tuple, const std::vector<int>& cards) {
  if (tuple.size() != cards.size()) throw DimensionError("tuple length does not match party count");
  std::size_t index = 0;
  for (std::size_t k = cards.size(); k-- > 0;) {
    if (tuple[k] < 0 || tuple[k] >= cards[k]) throw DimensionError("tuple entry out of range");
    index = index * static_cast<std::size_t>(cards[k]) + static_cast<std::size_t>(tuple[k]);
  }
  return index;
}

std::vector<int> decode_multi_index(std::size_t index, const std::vector<int>& cards) {
  std::vector<int> tuple(cards.size());
  for (std::size_t k = 0; k < cards.size(); ++k) {
    tuple[k] = static_cast<int>(index % static_cast<std::size_t>(cards[k]));
    index /= static_cast<std::size_t>(cards[k]);
  }
  return tuple;
}

std::size_t Scenario::num_input_tuples() const { return product_of(inputs_per_party); }
std::size_t Scenario::num_outcome_tuples() const { return product_of(outputs_per_party); }
std::size_t Scenario::input_index(const std::vector<int>& x) const {
  return encode_multi_index(x, inputs_per_party);
}
std::size_t Scenario::outcome_index(const std::vector<int>& a) const {
  return encode_multi_index(a, outputs_per_party);
}
std::vector<int> Scenario::input_tuple(std::size_t index) const {
  return decode_multi_index(index, inputs_per_party);
}
std::vector<int> Scenario::outcome_tuple(std::size_t index) const {
  return decode_multi_index(index, outputs_per_party);
}

Assemblage make_assemblage(const Scenario& scenario) {
  if (scenario.trusted_dim < 1) throw DimensionError("assemblage needs trusted_dim >= 1");
  return Assemblage(scenario, HermitianOperator::zero(scenario.trusted_dim));
}

Behavior make_behavior(const Scenario& scenario) {
  Scenario s = scenario;
  s.trusted_dim = 0;
  return Behavior(s, 0.0);
}

namespace {

template <typename T>
void require_same_scenario(const CorrelationTable<T>& t1, const CorrelationTable<T>& t2) {
  if (!(t1.scenario() == t2.scenario())) throw DimensionError("scenario mismatch");
}

}  // namespace

Assemblage mix(const Assemblage& a1, const Assemblage& a2, double weight1) {
  require_same_scenario(a1, a2);
  Assemblage out = a1;
  for (std::size_t i = 0; i < out.elements().size(); ++i)
    out.elements()[i] = weight1 * a1.elements()[i] + (1 - weight1) * a2.elements()[i];
  return out;
}

Behavior mix(const Behavior& p1, const Behavior& p2, double weight1) {
  require_same_scenario(p1, p2);
  Behavior out = p1;
  for (std::size_t i = 0; i < out.elements().size(); ++i)
    out.elements()[i] = weight1 * p1.elements()[i] + (1 - weight1) * p2.elements()[i];
  return out;
}

double max_abs_difference(const Assemblage& a1, const Assemblage& a2) {
  require_same_scenario(a1, a2);
  double d = 0;
  for (std::size_t i = 0; i < a1.elements().size(); ++i)
    d = std::max(d, max_abs_difference(a1.elements()[i], a2.elements()[i]));
  return d;
}

double max_abs_difference(const Behavior& p1, const Behavior& p2) {
  require_same_scenario(p1, p2);
  double d = 0;
  for (std::size_t i = 0; i < p1.elements().size(); ++i)
    d = std::max(d, std::abs(p1.elements()[i] - p2.elements()[i]));
  return d;
}

Assemblage maximally_mixed_assemblage(const Scenario& scenario) {
  Assemblage a = make_assemblage(scenario);
  const double w = 1.0 / (static_cast<double>(a.num_outcomes()) * scenario.trusted_dim);
  for (auto& e : a.elements()) e = w * HermitianOperator::identity(scenario.trusted_dim);
  return a;
}

HermitianOperator conditional_state(const HermitianOperator& element, double tol) {
  const double t = element.trace();
  if (t <= tol) throw InvalidInput("conditional state of a zero-probability element");
  return element / t;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNegativity: return "negativity";
    case ViolationKind::kNormalization: return "normalization";
    case ViolationKind::kTrustedSignaling: return "signaling-to-trusted";
    case ViolationKind::kPartySignaling: return "signaling-between-untrusted";
  }
  return "unknown";
}

double ValidationReport::magnitude(ViolationKind kind) const {
  double m = 0;
  for (const auto& v : violations)
    if (v.kind == kind) m = std::max(m, v.magnitude);
  return m;
}

namespace {

double distance(const HermitianOperator& a, const HermitianOperator& b) { return max_abs_difference(a, b); }
double distance(double a, double b) { return std::abs(a - b); }

/// For each party k: the partial sum over a_k, at fixed other outcomes and fixed
/// other inputs, must not depend on x_k.
template <typename T>
std::vector<double> party_signaling(const CorrelationTable<T>& t, const T& zero) {
  const Scenario& s = t.scenario();
  std::vector<double> worst(static_cast<std::size_t>(s.n_untrusted), 0.0);
  for (int k = 0; k < s.n_untrusted; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (std::size_t xi = 0; xi < t.num_inputs(); ++xi) {
      auto x = s.input_tuple(xi);
      if (x[ku] != 0) continue;
      for (std::size_t ai = 0; ai < t.num_outcomes(); ++ai) {
        auto a = s.outcome_tuple(ai);
        if (a[ku] != 0) continue;
        auto marginal = [&](int xk) {
          T sum = zero;
          auto xx = x;
          xx[ku] = xk;
          auto aa = a;
          for (int ak = 0; ak < s.outputs_per_party[ku]; ++ak) {
            aa[ku] = ak;
            sum = sum + t.at(aa, xx);
          }
          return sum;
        };
        const T reference = marginal(0);
        for (int xk = 1; xk < s.inputs_per_party[ku]; ++xk)
          worst[ku] = std::max(worst[ku], distance(marginal(xk), reference));
      }
    }
  }
  return worst;
}

void push_if(ValidationReport& r, ViolationKind kind, double magnitude, int party = -1) {
  if (magnitude > r.tolerance) r.violations.push_back({kind, party, magnitude});
}

}  // namespace

ValidationReport validate(const Assemblage& a, double tol) {
  ValidationReport r;
  r.tolerance = tol;
  const int d = a.scenario().trusted_dim;
  double negativity = 0, normalization = 0, trusted = 0;
  HermitianOperator reduced0 = HermitianOperator::zero(d);
  for (std::size_t x = 0; x < a.num_inputs(); ++x) {
    HermitianOperator reduced = HermitianOperator::zero(d);
    for (std::size_t o = 0; o < a.num_outcomes(); ++o) {
      if (a.at(o, x).dim() != d) throw DimensionError("assemblage element of wrong dimension");
      negativity = std::max(negativity, -min_eigenvalue(a.at(o, x)));
      reduced += a.at(o, x);
    }
    normalization = std::max(normalization, std::abs(reduced.trace() - 1));
    if (x == 0)
      reduced0 = reduced;
    else
      trusted = std::max(trusted, max_abs_difference(reduced, reduced0));
  }
  push_if(r, ViolationKind::kNegativity, negativity);
  push_if(r, ViolationKind::kNormalization, normalization);
  push_if(r, ViolationKind::kTrustedSignaling, trusted);
  const auto parties = party_signaling(a, HermitianOperator::zero(d));
  for (std::size_t k = 0; k < parties.size(); ++k)
    push_if(r, ViolationKind::kPartySignaling, parties[k], static_cast<int>(k));
  return r;
}

ValidationReport validate(const Behavior& p, double tol) {
  ValidationReport r;
  r.tolerance = tol;
  double negativity = 0, normalization = 0;
  for (std::size_t x = 0; x < p.num_inputs(); ++x) {
    double total = 0;
    for (std::size_t o = 0; o < p.num_outcomes(); ++o) {
      negativity = std::max(negativity, -p.at(o, x));
      total += p.at(o, x);
    }
    normalization = std::max(normalization, std::abs(total - 1));
  }
  push_if(r, ViolationKind::kNegativity, negativity);
  push_if(r, ViolationKind::kNormalization, normalization);
  const auto parties = party_signaling(p, 0.0);
  for (std::size_t k = 0; k < parties.size(); ++k)
    push_if(r, ViolationKind::kPartySignaling, parties[k], static_cast<int>(k));
  return r;
}

Behavior behavior_from_assemblage(const Assemblage& a,
                                  const std::vector<std::vector<HermitianOperator>>& measurements,
                                  double tol) {
  const Scenario& s = a.scenario();
  if (measurements.empty()) throw InvalidInput("no trusted-side measurements given");
  const std::size_t outcomes = measurements.front().size();
  for (const auto& povm : measurements) {
    if (povm.size() != outcomes || outcomes == 0)
      throw InvalidInput("all trusted-side POVMs must have the same non-zero number of outcomes");
    HermitianOperator total = HermitianOperator::zero(s.trusted_dim);
    for (const auto& effect : povm) {
      if (effect.dim() != s.trusted_dim) throw DimensionError("POVM effect of wrong dimension");
      if (min_eigenvalue(effect) < -tol) throw InvalidInput("POVM effect is not PSD");
      total += effect;
    }
    if (max_abs_difference(total, HermitianOperator::identity(s.trusted_dim)) > tol)
      throw InvalidInput("POVM effects do not sum to the identity");
  }
  Scenario out;
  out.n_untrusted = s.n_untrusted + 1;
  out.inputs_per_party = s.inputs_per_party;
  out.inputs_per_party.push_back(static_cast<int>(measurements.size()));
  out.outputs_per_party = s.outputs_per_party;
  out.outputs_per_party.push_back(static_cast<int>(outcomes));
  Behavior p = make_behavior(out);
  const std::size_t na = a.num_outcomes(), nx = a.num_inputs();
  for (std::size_t z = 0; z < measurements.size(); ++z)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t c = 0; c < outcomes; ++c)
        for (std::size_t o = 0; o < na; ++o)
          p.at(c * na + o, z * nx + x) = trace_product(a.at(o, x), measurements[z][c]);
  return p;
}

std::vector<HermitianOperator> observable_povm(const HermitianOperator& observable) {
  const auto& m = observable.matrix();
  const Eigen::Index d = m.rows();
  const Eigen::MatrixXcd square = m * m;
  if ((square - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidInput("observable must have spectrum in {+1, -1}");
  const HermitianOperator id = HermitianOperator::identity(d);
  return {(id + observable) / 2.0, (id - observable) / 2.0};
}

double assemblage_fidelity(const Assemblage& a1, const Assemblage& a2) {
  require_same_scenario(a1, a2);
  double total = 0;
  const double zero = 1e-14;
  for (std::size_t x = 0; x < a1.num_inputs(); ++x) {
    for (std::size_t o = 0; o < a1.num_outcomes(); ++o) {
      const double p1 = std::max(0.0, a1.at(o, x).trace());
      const double p2 = std::max(0.0, a2.at(o, x).trace());
      if (p1 <= zero || p2 <= zero) continue;
      total += std::sqrt(p1 * p2) *
               state_fidelity(conditional_state(a1.at(o, x), zero), conditional_state(a2.at(o, x), zero),
                              1e-6);
    }
  }
  return std::clamp(total / static_cast<double>(a1.num_inputs()), 0.0, 1.0);
}

}  // namespace steerkit
