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

#include <algorithm>
#include <numeric>

#include "steerkit/correlation.hpp"

namespace steerkit {

namespace {

std::vector<int> cards_in_order(const std::vector<int>& cards, const std::vector<int>& ordering,
                                std::size_t count) {
  std::vector<int> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(cards[static_cast<std::size_t>(ordering[k])]);
  return out;
}

std::size_t wired_outcomes(const Scenario& s, std::size_t m) {
  return product_of(std::vector<int>(s.outputs_per_party.begin(),
                                     s.outputs_per_party.begin() + static_cast<std::ptrdiff_t>(m)));
}

}  // namespace

void Wiring::check(const Scenario& s) const {
  const std::size_t m = ordering.size();
  if (m == 0 || m > static_cast<std::size_t>(s.n_untrusted))
    throw DimensionError("wiring ordering must name between 1 and n_untrusted parties");
  std::vector<int> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < m; ++k)
    if (sorted[k] != static_cast<int>(k))
      throw DimensionError("wiring ordering must be a permutation of the first parties");
  if (final_inputs.size() != final_outputs.size() || final_inputs.empty())
    throw DimensionError("wiring final arities must describe at least one party");
  for (std::size_t k = 0; k < final_inputs.size(); ++k)
    if (final_inputs[k] < 1 || final_outputs[k] < 1) throw DimensionError("wiring final arities must be >= 1");
  if (input_maps.size() != m) throw DimensionError("wiring needs one input map per wired party");
  const std::size_t nx = product_of(final_inputs);
  std::size_t earlier = 1;
  for (std::size_t k = 0; k < m; ++k) {
    const auto party = static_cast<std::size_t>(ordering[k]);
    if (input_maps[k].size() != nx * earlier)
      throw DimensionError("wiring input map " + std::to_string(k) + " has the wrong size");
    for (int v : input_maps[k])
      if (v < 0 || v >= s.inputs_per_party[party])
        throw DimensionError("wiring input map " + std::to_string(k) + " produces an invalid input");
    earlier *= static_cast<std::size_t>(s.outputs_per_party[party]);
  }
  if (output_map.size() != wired_outcomes(s, m)) throw DimensionError("wiring output map has the wrong size");
  const std::size_t no = product_of(final_outputs);
  for (int v : output_map)
    if (v < 0 || static_cast<std::size_t>(v) >= no) throw DimensionError("wiring output map produces an invalid outcome");
}

Wiring Wiring::y_equals_a() {
  Wiring w;
  w.ordering = {0, 1};
  w.final_inputs = {2};
  w.final_outputs = {2};
  w.input_maps = {{0, 1}, {0, 1, 0, 1}};  // [x'] and [x' * 2 + a]
  w.output_map = {0, 0, 1, 1};            // (a, b) -> b
  return w;
}

Wiring Wiring::identity(const Scenario& s) {
  Wiring w;
  const std::size_t n = static_cast<std::size_t>(s.n_untrusted);
  w.ordering.resize(n);
  std::iota(w.ordering.begin(), w.ordering.end(), 0);
  w.final_inputs = s.inputs_per_party;
  w.final_outputs = s.outputs_per_party;
  const std::size_t nx = s.num_input_tuples();
  std::size_t earlier = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> map(nx * earlier);
    for (std::size_t X = 0; X < nx; ++X) {
      const int xk = s.input_tuple(X)[k];
      for (std::size_t e = 0; e < earlier; ++e) map[X * earlier + e] = xk;
    }
    w.input_maps.push_back(std::move(map));
    earlier *= static_cast<std::size_t>(s.outputs_per_party[k]);
  }
  w.output_map.resize(s.num_outcome_tuples());
  std::iota(w.output_map.begin(), w.output_map.end(), 0);
  return w;
}

namespace {

/// Shared engine: for every final input X and wired outcome tuple, the inputs
/// fed to the wired parties follow sequentially from input_maps.
template <typename T>
CorrelationTable<T> wire(const CorrelationTable<T>& in, const Wiring& w, const Scenario& out_scenario,
                         const T& zero) {
  const Scenario& s = in.scenario();
  w.check(s);
  const std::size_t m = w.ordering.size();
  const std::size_t n = static_cast<std::size_t>(s.n_untrusted);
  const std::vector<int> wired_out_cards(s.outputs_per_party.begin(),
                                         s.outputs_per_party.begin() + static_cast<std::ptrdiff_t>(m));
  const std::vector<int> rest_in(s.inputs_per_party.begin() + static_cast<std::ptrdiff_t>(m),
                                 s.inputs_per_party.end());
  const std::vector<int> rest_out(s.outputs_per_party.begin() + static_cast<std::ptrdiff_t>(m),
                                  s.outputs_per_party.end());
  const std::vector<int> order_out_cards = cards_in_order(s.outputs_per_party, w.ordering, m);
  const std::size_t nX = product_of(w.final_inputs), nA = product_of(w.final_outputs);
  const std::size_t nrest_x = product_of(rest_in), nrest_a = product_of(rest_out);
  const std::size_t nwired = product_of(wired_out_cards);

  CorrelationTable<T> out(out_scenario, zero);
  std::vector<int> x(n), a(n);
  for (std::size_t X = 0; X < nX; ++X) {
    for (std::size_t rx = 0; rx < nrest_x; ++rx) {
      const auto rest_x = decode_multi_index(rx, rest_in);
      for (std::size_t k = m; k < n; ++k) x[k] = rest_x[k - m];
      for (std::size_t wa = 0; wa < nwired; ++wa) {
        const auto wired_a = decode_multi_index(wa, wired_out_cards);
        std::size_t earlier = 0, stride = 1;
        for (std::size_t k = 0; k < m; ++k) {
          const auto party = static_cast<std::size_t>(w.ordering[k]);
          const std::size_t e_k = product_of(std::vector<int>(order_out_cards.begin(),
                                                              order_out_cards.begin() + static_cast<std::ptrdiff_t>(k)));
          x[party] = w.input_maps[k][X * e_k + earlier];
          earlier += stride * static_cast<std::size_t>(wired_a[party]);
          stride *= static_cast<std::size_t>(order_out_cards[k]);
        }
        for (std::size_t k = 0; k < m; ++k) a[k] = wired_a[k];
        const std::size_t A = static_cast<std::size_t>(w.output_map[wa]);
        for (std::size_t ra = 0; ra < nrest_a; ++ra) {
          const auto rest_a = decode_multi_index(ra, rest_out);
          for (std::size_t k = m; k < n; ++k) a[k] = rest_a[k - m];
          auto& target = out.at(A + nA * ra, X + nX * rx);
          target = target + in.at(a, x);
        }
      }
    }
  }
  return out;
}

Scenario wired_scenario(const Scenario& s, const Wiring& w, int trusted_dim) {
  w.check(s);
  const auto m = static_cast<std::ptrdiff_t>(w.ordering.size());
  Scenario out;
  out.n_untrusted = static_cast<int>(w.final_inputs.size()) + s.n_untrusted - static_cast<int>(m);
  out.inputs_per_party = w.final_inputs;
  out.inputs_per_party.insert(out.inputs_per_party.end(), s.inputs_per_party.begin() + m, s.inputs_per_party.end());
  out.outputs_per_party = w.final_outputs;
  out.outputs_per_party.insert(out.outputs_per_party.end(), s.outputs_per_party.begin() + m,
                               s.outputs_per_party.end());
  out.trusted_dim = trusted_dim;
  return out;
}

}  // namespace

Assemblage apply_wiring(const Assemblage& a, const Wiring& w) {
  const Scenario& s = a.scenario();
  if (w.ordering.size() != static_cast<std::size_t>(s.n_untrusted))
    throw DimensionError("an assemblage wiring must involve every untrusted party");
  return wire(a, w, wired_scenario(s, w, s.trusted_dim), HermitianOperator::zero(s.trusted_dim));
}

Behavior apply_wiring_behavior(const Behavior& p, const Wiring& w) {
  return wire(p, w, wired_scenario(p.scenario(), w, 0), 0.0);
}

}  // namespace steerkit
