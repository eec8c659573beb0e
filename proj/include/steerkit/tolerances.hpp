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

namespace steerkit {

/// Every numerical verdict in the library is taken against one of these.
struct Tolerances {
  /// Slack allowed below zero on eigenvalues of operators claimed PSD.
  double psd = 1e-9;
  /// Entrywise equality, normalization and no-signaling checks.
  double equality = 1e-8;
  /// Recomposition of a hidden-state decomposition against its target.
  double decomposition = 1e-7;
  /// Robustness values at or below this count as zero.
  double robustness_zero = 1e-7;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Reconstructed (noisy) data is compared more loosely.
inline constexpr Tolerances kExperimentTolerances{1e-6, 1e-6, 1e-6, 1e-6};

}  // namespace steerkit
