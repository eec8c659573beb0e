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

#include "steerkit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <Eigen/QR>

#include "steerkit/error.hpp"
#include "steerkit/io.hpp"
#include "steerkit/protocols.hpp"

namespace steerkit {

std::vector<HermitianOperator> pauli_projectors() {
  std::vector<HermitianOperator> out;
  for (const auto& p : {pauli::X(), pauli::Y(), pauli::Z()}) {
    out.push_back((pauli::I() + p) / 2.0);
    out.push_back((pauli::I() - p) / 2.0);
  }
  return out;
}

namespace {

void require_complete(const std::vector<HermitianOperator>& projectors, int d) {
  if (projectors.empty()) throw InvalidInput("empty projector set");
  Eigen::MatrixXd m(d * d, static_cast<Eigen::Index>(projectors.size()));
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    if (projectors[k].dim() != d) throw InvalidInput("projector dimension differs from the trusted system");
    m.col(static_cast<Eigen::Index>(k)) = svec(projectors[k].matrix());
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  if (qr.rank() < d * d) throw InvalidInput("projector set is not tomographically complete");
}

CountRecord expected_counts(const Assemblage& a, double flux, const std::vector<HermitianOperator>& projectors) {
  if (!(flux > 0)) throw InvalidInput("flux must be positive");
  require_complete(projectors, a.scenario().trusted_dim);
  CountRecord c;
  c.scenario = a.scenario();
  c.projectors = projectors;
  c.flux = flux;
  for (const auto& s : a.elements()) {
    std::vector<double> row;
    for (const auto& p : projectors) row.push_back(std::max(0.0, flux * trace_product(s, p)));
    c.intensity.push_back(std::move(row));
  }
  return c;
}

double weight(double n) { return 1.0 / std::max(n, 1.0); }

}  // namespace

CountRecord sample_counts(const Assemblage& a, double flux, std::uint64_t seed,
                          const std::vector<HermitianOperator>& projectors) {
  CountRecord c = expected_counts(a, flux, projectors);
  c.seed = seed;
  std::mt19937_64 rng(seed);
  for (const auto& row : c.intensity) {
    std::vector<double> drawn;
    for (double mean : row) {
      if (mean <= 0) {
        drawn.push_back(0);
        continue;
      }
      std::poisson_distribution<long long> poisson(mean);
      drawn.push_back(static_cast<double>(poisson(rng)));
    }
    c.counts.push_back(std::move(drawn));
  }
  return c;
}

CountRecord exact_counts(const Assemblage& a, double flux, const std::vector<HermitianOperator>& projectors) {
  CountRecord c = expected_counts(a, flux, projectors);
  c.counts = c.intensity;
  c.noiseless = true;
  return c;
}

double fit_error(const Assemblage& a, const CountRecord& c) {
  if (!(a.scenario() == c.scenario)) throw DimensionError("assemblage does not match the count record");
  double err = 0;
  for (std::size_t e = 0; e < c.counts.size(); ++e)
    for (std::size_t k = 0; k < c.projectors.size(); ++k) {
      const double r = c.flux * trace_product(a.elements()[e], c.projectors[k]) - c.counts[e][k];
      err += weight(c.counts[e][k]) * r * r;
    }
  return err;
}

Reconstruction reconstruct(const CountRecord& c, FitSet set, const SolverSettings& settings) {
  const Scenario& s = c.scenario;
  const int d = s.trusted_dim, n = d * d;
  const std::size_t elements = c.counts.size();
  if (elements != s.num_input_tuples() * s.num_outcome_tuples() || c.projectors.empty())
    throw InvalidInput("incomplete count record");
  require_complete(c.projectors, d);

  ProgramBuilder b;
  std::vector<int> element_blocks;
  std::vector<Strategy> strategies;
  std::vector<int> strategy_blocks;
  const HermitianOperator id = HermitianOperator::identity(d);
  if (set == FitSet::kNoSignaling) {
    for (std::size_t e = 0; e < elements; ++e) element_blocks.push_back(b.add_block(d));
    add_no_signaling_constraints(b, s, element_blocks);
    const int norm = b.add_row(1.0);
    for (std::size_t o = 0; o < s.num_outcome_tuples(); ++o) b.add_trace_term(norm, element_blocks[o], id);
  } else {
    strategies = enumerate_strategies(ModelClass::kLHS, s);
    const int norm = b.add_row(1.0);
    for (std::size_t k = 0; k < strategies.size(); ++k) {
      strategy_blocks.push_back(b.add_block(d));
      b.add_trace_term(norm, strategy_blocks.back(), id);
    }
  }

  // Residual r_e = R p_e - Q^T q_e from a QR of the weighted design matrix;
  // the arrow block [[t, r^T], [r, I]] is PSD iff t >= |r|^2.
  auto unit = [n](int i, int j) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    m(i, j) += 0.5;
    m(j, i) += 0.5;
    return HermitianOperator::from_matrix(m);
  };
  const std::size_t np = c.projectors.size();
  for (std::size_t e = 0; e < elements; ++e) {
    Eigen::MatrixXd l(static_cast<Eigen::Index>(np), n);
    Eigen::VectorXd q(static_cast<Eigen::Index>(np));
    for (std::size_t k = 0; k < np; ++k) {
      // Same minimizer as the chi-square, divided by the flux so the rows stay O(1).
      const double sw = std::sqrt(c.flux * weight(c.counts[e][k]));
      l.row(static_cast<Eigen::Index>(k)) = sw * svec(c.projectors[k].matrix()).transpose();
      q(static_cast<Eigen::Index>(k)) = sw * c.counts[e][k] / c.flux;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(l);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const Eigen::VectorXd qtq = (qr.householderQ().transpose() * q).head(n);

    const int arrow = b.add_block(n + 1, true);
    b.add_objective(arrow, unit(0, 0));
    for (int j = 0; j < n; ++j) {
      const int row = b.add_row(-qtq(j));
      b.add_trace_term(row, arrow, unit(0, j + 1));
      for (int m = 0; m < n; ++m) {
        if (r(j, m) == 0) continue;
        if (set == FitSet::kNoSignaling) {
          b.add_coefficient(row, element_blocks[e], m, -r(j, m));
        } else {
          for (std::size_t k = 0; k < strategies.size(); ++k) {
            const double p = strategies[k].behavior.elements()[e];
            if (p != 0) b.add_coefficient(row, strategy_blocks[k], m, -r(j, m) * p);
          }
        }
      }
    }
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) b.add_trace_term(b.add_row(i == j ? 1.0 : 0.0), arrow, unit(i, j));
  }
  b.set_sense(Sense::kMinimize);
  const ConicProgram p = b.build();
  const ConicSolution sol = solve(p, settings);
  if (sol.status != SolveStatus::kOptimal)
    throw SolverFailure("reconstruction program did not converge: " + to_string(sol.status));

  Reconstruction out;
  out.status = sol.status;
  out.assemblage = make_assemblage(s);
  if (set == FitSet::kNoSignaling) {
    for (std::size_t e = 0; e < elements; ++e)
      out.assemblage.elements()[e] = sol.primal[static_cast<std::size_t>(element_blocks[e])];
  } else {
    for (std::size_t k = 0; k < strategies.size(); ++k)
      for (std::size_t e = 0; e < elements; ++e) {
        const double pk = strategies[k].behavior.elements()[e];
        if (pk != 0) out.assemblage.elements()[e] += pk * sol.primal[static_cast<std::size_t>(strategy_blocks[k])];
      }
  }
  out.fit_error = fit_error(out.assemblage, c);
  return out;
}

int Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Histogram make_histogram(const std::vector<double>& values, int bins, double lo, double hi) {
  if (bins < 1) throw InvalidInput("histogram needs at least one bin");
  if (!(hi > lo)) hi = lo + 1e-12;
  Histogram h;
  for (int k = 0; k <= bins; ++k) h.edges.push_back(lo + (hi - lo) * k / bins);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    const int k = std::clamp(static_cast<int>(std::floor((v - lo) / (hi - lo) * bins)), 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(k)];
  }
  return h;
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
  if (values.empty()) return make_histogram(values, bins, 0, 1);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return make_histogram(values, bins, *lo, *hi);
}

Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  s.min = v.front();
  s.max = v.back();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  const std::size_t h = v.size() / 2;
  s.median = v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  return s;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STEERKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PipelineResult pipeline_histograms(const Assemblage& a, const PipelineOptions& options) {
  if (options.seeds < 1) throw InvalidInput("at least one seed is required");
  const bool wired = options.witness == PipelineWitness::kWiredSteering;
  if (!(a.scenario() == Scenario::binary(2, 2)))
    throw InvalidInput("the pipeline expects two binary black boxes and a qubit");
  const CanonicalWitnesses witnesses = canonical_witnesses();

  PipelineResult result;
  result.options = options;
  result.records.resize(static_cast<std::size_t>(options.seeds));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (int i = next++; i < options.seeds; i = next++) {
      try {
        SeedRecord rec;
        rec.seed = options.base_seed + static_cast<std::uint64_t>(i);
        const CountRecord counts = sample_counts(a, options.flux, rec.seed);
        const Reconstruction fit = reconstruct(counts);
        rec.fit_error_ns = fit.fit_error;
        if (options.compare_lhs_fit) rec.fit_error_lhs = reconstruct(counts, FitSet::kLHS).fit_error;
        const RobustnessResult rob = robustness(fit.assemblage, options.robustness_class, options.robustness_mode);
        rec.status = to_string(rob.status);
        rec.robustness = rob.value;
        rec.witness = wired ? evaluate_witness(witnesses.steering, apply_wiring(fit.assemblage, Wiring::y_equals_a()))
                            : evaluate_witness(witnesses.ns_lhs, fit.assemblage);
        rec.fidelity = assemblage_fidelity(fit.assemblage, a);
        result.records[static_cast<std::size_t>(i)] = rec;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = options.seeds;
      }
    }
  };
  const int threads = std::min(resolve_thread_count(options.threads), options.seeds);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::vector<double> rob, wit, fid, ns, lhs;
  for (const auto& r : result.records) {
    rob.push_back(r.robustness);
    wit.push_back(r.witness);
    fid.push_back(r.fidelity);
    ns.push_back(r.fit_error_ns);
    if (r.fit_error_lhs) lhs.push_back(*r.fit_error_lhs);
  }
  result.robustness = make_histogram(rob, options.bins, 0, std::max(*std::max_element(rob.begin(), rob.end()), 1e-9));
  result.witness = make_histogram(wit, options.bins);
  if (options.compare_lhs_fit) {
    // Shared range so the two fit-error histograms are directly comparable.
    std::vector<double> both = ns;
    both.insert(both.end(), lhs.begin(), lhs.end());
    const auto [lo, hi] = std::minmax_element(both.begin(), both.end());
    result.fit_error_ns = make_histogram(ns, options.bins, *lo, *hi);
    result.fit_error_lhs = make_histogram(lhs, options.bins, *lo, *hi);
  } else {
    result.fit_error_ns = make_histogram(ns, options.bins);
  }
  result.robustness_summary = summarize(rob);
  result.witness_summary = summarize(wit);
  result.fidelity_summary = summarize(fid);
  return result;
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
  out << "bin_low,bin_high,count\n";
  out.precision(17);
  for (std::size_t k = 0; k < h.counts.size(); ++k) out << h.edges[k] << ',' << h.edges[k + 1] << ',' << h.counts[k] << '\n';
}

void write_records_jsonl(const PipelineResult& r, std::ostream& out) {
  for (const auto& rec : r.records) {
    nlohmann::json j = {{"seed", rec.seed},         {"robustness", rec.robustness}, {"witness", rec.witness},
                        {"fidelity", rec.fidelity}, {"fit_error_ns", rec.fit_error_ns}, {"status", rec.status}};
    if (rec.fit_error_lhs) j["fit_error_lhs"] = *rec.fit_error_lhs;
    out << j.dump() << '\n';
  }
}

nlohmann::json to_json(const CountRecord& c) {
  nlohmann::json proj = nlohmann::json::array();
  for (const auto& p : c.projectors) proj.push_back(io::to_json(p));
  return {{"scenario", io::to_json(c.scenario)}, {"projectors", proj}, {"flux", c.flux},
          {"intensity", c.intensity},            {"counts", c.counts},  {"noiseless", c.noiseless},
          {"seed", c.seed},                      {"generator", c.generator}};
}

nlohmann::json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

nlohmann::json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
}

nlohmann::json to_json(const PipelineResult& r) {
  const auto& o = r.options;
  nlohmann::json j = {
      {"options",
       {{"flux", o.flux},
        {"seeds", o.seeds},
        {"base_seed", o.base_seed},
        {"robustness_class", to_string(o.robustness_class)},
        {"robustness_mode", to_string(o.robustness_mode)},
        {"witness", o.witness == PipelineWitness::kWiredSteering ? "wired-steering" : "ns-lhs"},
        {"compare_lhs_fit", o.compare_lhs_fit}}},
      {"surrogates",
       {{"generator", "mt19937_64"},
        {"likelihood", "gaussian weighted least squares, weight 1/max(n,1)"},
        {"projectors", "pauli eigenprojectors"}}},
      {"robustness", {{"summary", to_json(r.robustness_summary)}, {"histogram", to_json(r.robustness)}}},
      {"witness", {{"summary", to_json(r.witness_summary)}, {"histogram", to_json(r.witness)}}},
      {"fidelity", to_json(r.fidelity_summary)},
      {"fit_error_ns", to_json(r.fit_error_ns)}};
  if (r.fit_error_lhs) j["fit_error_lhs"] = to_json(*r.fit_error_lhs);
  return j;
}

}  // namespace steerkit
