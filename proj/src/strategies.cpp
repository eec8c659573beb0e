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

#include "steerkit/strategies.hpp"

#include <algorithm>

#include "steerkit/error.hpp"

namespace steerkit {

std::string to_string(ModelClass c) {
  switch (c) {
    case ModelClass::kLHS: return "lhs";
    case ModelClass::kTOAtoB: return "to-ab";
    case ModelClass::kTOBtoA: return "to-ba";
    case ModelClass::kTOLHS: return "to-lhs";
    case ModelClass::kNSLHS: return "ns-lhs";
  }
  return "unknown";
}

ModelClass model_class_from_string(const std::string& s) {
  for (ModelClass c : {ModelClass::kLHS, ModelClass::kTOAtoB, ModelClass::kTOBtoA, ModelClass::kTOLHS,
                       ModelClass::kNSLHS})
    if (to_string(c) == s) return c;
  throw InvalidInput("unknown model class '" + s + "'");
}

namespace {

Scenario behavior_scenario(const Scenario& s) {
  Scenario b = s;
  b.trusted_dim = 0;
  return b;
}

std::string bits_label(unsigned value, int width) {
  std::string out;
  for (int k = width - 1; k >= 0; --k) out.push_back(((value >> k) & 1u) ? '1' : '0');
  return out;
}

/// Every map from input tuples to outcome tuples.
std::vector<Strategy> all_deterministic(const Scenario& s) {
  const std::size_t nx = s.num_input_tuples(), na = s.num_outcome_tuples();
  std::size_t count = 1;
  for (std::size_t k = 0; k < nx; ++k) {
    if (count > (1u << 20) / na) throw InvalidInput("deterministic strategy set too large");
    count *= na;
  }
  std::vector<Strategy> out;
  out.reserve(count);
  for (std::size_t lambda = 0; lambda < count; ++lambda) {
    Behavior p = make_behavior(behavior_scenario(s));
    std::size_t rest = lambda;
    std::string label = "det:";
    // Input tuple 0 is the most significant digit.
    std::vector<std::size_t> digits(nx);
    for (std::size_t k = nx; k-- > 0;) {
      digits[k] = rest % na;
      rest /= na;
    }
    for (std::size_t x = 0; x < nx; ++x) {
      p.at(digits[x], x) = 1.0;
      label += std::to_string(digits[x]);
    }
    out.push_back({label, std::move(p)});
  }
  return out;
}

void require_binary_pair(const Scenario& s, ModelClass c) {
  if (s.n_untrusted != 2 || s.inputs_per_party != std::vector<int>{2, 2} ||
      s.outputs_per_party != std::vector<int>{2, 2})
    throw InvalidInput("class " + to_string(c) + " is enumerated for two binary untrusted parties only");
}

std::vector<Strategy> one_way(bool a_first, const Scenario& s) {
  std::vector<Strategy> out;
  for (unsigned lambda = 0; lambda < 64; ++lambda) {
    auto bit = [&](int k) { return static_cast<int>((lambda >> (5 - k)) & 1u); };
    Behavior p = make_behavior(behavior_scenario(s));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        int a, b;
        if (a_first) {
          a = bit(x);
          b = bit(2 + 2 * x + y);
        } else {
          b = bit(y);
          a = bit(2 + 2 * y + x);
        }
        p.at({a, b}, {x, y}) = 1.0;
      }
    out.push_back({std::string(a_first ? "to-ab:" : "to-ba:") + bits_label(lambda, 6), std::move(p)});
  }
  return out;
}

std::vector<Strategy> no_signaling_vertices(const Scenario& s) {
  std::vector<Strategy> out;
  for (unsigned lambda = 0; lambda < 16; ++lambda) {
    auto bit = [&](int k) { return static_cast<int>((lambda >> (3 - k)) & 1u); };
    Behavior p = make_behavior(behavior_scenario(s));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) p.at({bit(x), bit(2 + y)}, {x, y}) = 1.0;
    out.push_back({"local:" + bits_label(lambda, 4), std::move(p)});
  }
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int beta = 0; beta < 2; ++beta)
      for (int gamma = 0; gamma < 2; ++gamma) {
        Behavior p = make_behavior(behavior_scenario(s));
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a) {
              const int b = a ^ (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
              p.at({a, b}, {x, y}) = 0.5;
            }
        out.push_back({"pr:" + std::to_string(alpha) + std::to_string(beta) + std::to_string(gamma), std::move(p)});
      }
  return out;
}

}  // namespace

std::vector<Strategy> enumerate_strategies(ModelClass c, const Scenario& s) {
  s.check();
  if (c == ModelClass::kTOLHS)
    throw InvalidInput("to-lhs is the intersection of to-ab and to-ba and has no single generating set");
  if (s.n_untrusted == 1 || c == ModelClass::kLHS) return all_deterministic(s);
  require_binary_pair(s, c);
  switch (c) {
    case ModelClass::kTOAtoB: return one_way(true, s);
    case ModelClass::kTOBtoA: return one_way(false, s);
    case ModelClass::kNSLHS: return no_signaling_vertices(s);
    default: break;
  }
  throw InvalidInput("unsupported class");
}

Assemblage sample_member(ModelClass c, const Scenario& s, std::mt19937_64& rng, int terms, bool pure_states) {
  const ModelClass base = c == ModelClass::kTOLHS ? ModelClass::kNSLHS : c;
  const auto strategies = enumerate_strategies(base, s);
  std::uniform_int_distribution<std::size_t> pick(0, strategies.size() - 1);
  std::exponential_distribution<double> expo(1.0);
  std::normal_distribution<double> normal(0, 1);
  const int d = s.trusted_dim;
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0;
  for (auto& v : w) total += (v = expo(rng));
  Assemblage out = make_assemblage(s);
  for (int t = 0; t < terms; ++t) {
    const auto& p = strategies[pick(rng)].behavior;
    const int rank = pure_states ? 1 : d;
    Eigen::MatrixXcd g(d, rank);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < rank; ++j) g(i, j) = {normal(rng), normal(rng)};
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho /= rho.trace().real();
    const auto state = HermitianOperator::from_matrix((rho + rho.adjoint()) / 2.0) * (w[static_cast<std::size_t>(t)] / total);
    for (std::size_t x = 0; x < out.num_inputs(); ++x)
      for (std::size_t a = 0; a < out.num_outcomes(); ++a)
        if (p.at(a, x) != 0) out.at(a, x) += p.at(a, x) * state;
  }
  return out;
}

}  // namespace steerkit
