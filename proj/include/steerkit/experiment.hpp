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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steerkit/correlation.hpp"
#include "steerkit/membership.hpp"

namespace steerkit {

/// Eigenprojectors of X, Y and Z, in that order (+1 then -1).
std::vector<HermitianOperator> pauli_projectors();

/// Photocounts per element (flat index) and per trusted-side projector.
struct CountRecord {
  Scenario scenario;
  std::vector<HermitianOperator> projectors;
  /// Expected counts per element and projector: flux * Tr[sigma Pi].
  double flux = 0;
  std::vector<std::vector<double>> intensity;
  /// Poisson draws, or the intensities themselves when `noiseless`.
  std::vector<std::vector<double>> counts;
  bool noiseless = false;
  std::uint64_t seed = 0;
  std::string generator = "mt19937_64";
};

/// Throws InvalidInput if the projectors do not span the Hermitian operators.
CountRecord sample_counts(const Assemblage& a, double flux, std::uint64_t seed,
                          const std::vector<HermitianOperator>& projectors = pauli_projectors());

/// Counts equal to their expectations (the infinite-statistics limit).
CountRecord exact_counts(const Assemblage& a, double flux,
                         const std::vector<HermitianOperator>& projectors = pauli_projectors());

/// sum over cells of (flux Tr[sigma Pi] - n)^2 / max(n, 1).
double fit_error(const Assemblage& a, const CountRecord& c);

enum class FitSet { kNoSignaling, kLHS };

struct Reconstruction {
  Assemblage assemblage;
  double fit_error = 0;
  SolveStatus status = SolveStatus::kNumericalFailure;
};

/// Weighted least-squares fit (weights 1 / max(n, 1), a Gaussian surrogate of
/// the Poisson likelihood) over normalized PSD assemblages in the given set.
/// Per element the residual norm is bounded by an arrow-head PSD block.
/// Throws SolverFailure if the program does not converge.
Reconstruction reconstruct(const CountRecord& c, FitSet set = FitSet::kNoSignaling,
                           const SolverSettings& settings = {});

inline Assemblage reconstruct_ns(const CountRecord& c) { return reconstruct(c).assemblage; }

struct Histogram {
  std::vector<double> edges;
  std::vector<int> counts;
  int total() const;
};

/// Equal-width bins over [lo, hi]; values outside are clamped into the end bins.
Histogram make_histogram(const std::vector<double>& values, int bins, double lo, double hi);
/// Range taken from the data.
Histogram make_histogram(const std::vector<double>& values, int bins);

enum class PipelineWitness { kWiredSteering, kNoSignaling };

struct PipelineOptions {
  double flux = 1e3;
  int seeds = 500;
  std::uint64_t base_seed = 1;
  /// 0: STEERKIT_THREADS, else the hardware concurrency.
  int threads = 0;
  ModelClass robustness_class = ModelClass::kLHS;
  NoiseMode robustness_mode = NoiseMode::kGeneralized;
  PipelineWitness witness = PipelineWitness::kWiredSteering;
  /// Also fit the best LHS assemblage to compare fit errors.
  bool compare_lhs_fit = false;
  int bins = 20;
};

struct SeedRecord {
  std::uint64_t seed = 0;
  double robustness = 0;
  double witness = 0;
  double fidelity = 0;
  double fit_error_ns = 0;
  std::optional<double> fit_error_lhs;
  std::string status;
};

struct Summary {
  double mean = 0, median = 0, stddev = 0, min = 0, max = 0;
};
Summary summarize(std::vector<double> values);

struct PipelineResult {
  PipelineOptions options;
  std::vector<SeedRecord> records;
  Histogram robustness;
  Histogram witness;
  Histogram fit_error_ns;
  std::optional<Histogram> fit_error_lhs;
  Summary robustness_summary, witness_summary, fidelity_summary;
};

/// Per seed: sample counts, fit an NS assemblage, compute its robustness and a
/// witness value. Seeds are processed in parallel; results are ordered by seed.
PipelineResult pipeline_histograms(const Assemblage& a, const PipelineOptions& options);

int resolve_thread_count(int requested);

void write_histogram_csv(const Histogram& h, std::ostream& out);
void write_records_jsonl(const PipelineResult& r, std::ostream& out);
nlohmann::json to_json(const CountRecord& c);
nlohmann::json to_json(const Histogram& h);
nlohmann::json to_json(const Summary& s);
/// Summary and histograms; per-seed records are written separately.
nlohmann::json to_json(const PipelineResult& r);

}  // namespace steerkit
