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

#include <random>
#include <string>
#include <vector>

#include "steerkit/correlation.hpp"

namespace steerkit {

enum class ModelClass { kLHS, kTOAtoB, kTOBtoA, kTOLHS, kNSLHS };

std::string to_string(ModelClass c);
/// Accepts "lhs", "to-ab", "to-ba", "to-lhs", "ns-lhs".
ModelClass model_class_from_string(const std::string& s);

/// One extreme lambda-behavior P(a|x, lambda) of a class.
struct Strategy {
  std::string label;
  Behavior behavior;
};

/// Finite generating set of a class on the untrusted parties of `scenario`.
///   LHS     : every deterministic map from input tuples to outcome tuples.
///   TO_AtoB : a = f(x), b = g(x, y); index bits (a0 a1 b00 b01 b10 b11), MSB first.
///   TO_BtoA : b = g(y), a = f(x, y); bits (b0 b1 a_{y0x0} a_{y0x1} a_{y1x0} a_{y1x1}).
///   NS_LHS  : 16 local deterministic points (a0 a1 b0 b1) followed by the 8 PR
///             boxes a^b = xy ^ alpha x ^ beta y ^ gamma, index 16 + 4 alpha + 2 beta + gamma.
/// On a single box every class reduces to a = f(x). TO_LHS has no generating
/// set of its own (it is an intersection) and is rejected.
std::vector<Strategy> enumerate_strategies(ModelClass c, const Scenario& scenario);

/// Member of the class: sum_k w_k D_k (x) rho_k over `terms` random extreme
/// strategies with random (possibly pure) states and Dirichlet-like weights.
Assemblage sample_member(ModelClass c, const Scenario& scenario, std::mt19937_64& rng, int terms,
                         bool pure_states = false);

}  // namespace steerkit
