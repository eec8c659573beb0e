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

// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// named criteria run (e.g. `acceptance 3 11b`); the exit code is 0 iff every
// selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "steerkit/experiment.hpp"
#include "steerkit/membership.hpp"
#include "steerkit/protocols.hpp"
#include "test_support.hpp"

namespace steerkit {
namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [violated]");
  }
};

std::string num(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

const Scenario kPair = Scenario::binary(2, 2);
const Scenario kSingle = Scenario::binary(1, 2);

/// Two-party behavior (wired party, trusted party) from a random single-box
/// assemblage measured in two random qubit bases.
Behavior random_wired_behavior(std::mt19937_64& rng) {
  const Assemblage a = testing::random_single_box_assemblage(rng);
  std::vector<std::vector<HermitianOperator>> m;
  for (int z = 0; z < 2; ++z) {
    const auto basis = testing::random_qubit_basis(rng);
    m.push_back({HermitianOperator::from_matrix(basis[0]), HermitianOperator::from_matrix(basis[1])});
  }
  return behavior_from_assemblage(a, m);
}

void canonical_recomposition(Result& r) {
  auto [ghz, model] = ghz_assemblage();
  const double ghz_dev = max_abs_difference(recompose(*model.lhs, kPair), ghz);
  r.require(ghz_dev <= 1e-12, "tripartite model deviation " + num(ghz_dev) + " <= 1e-12");
  std::mt19937_64 rng(101);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    auto [init, m] = universal_initial_assemblage(testing::random_single_box_assemblage(rng));
    worst = std::max(worst, max_abs_difference(recompose(*m.lhs, init.scenario()), init));
  }
  for (int k = 0; k < 50; ++k) {
    auto [init, m] = universal_initial_behavior(random_wired_behavior(rng));
    worst = std::max(worst, max_abs_difference(recompose(*m.lhv, init.scenario()), init));
  }
  r.require(worst <= 1e-12, "universal models on 100 random targets, max deviation " + num(worst) + " <= 1e-12");
}

void exposure_identity(Result& r) {
  const double wired_dev =
      max_abs_difference(apply_wiring(ghz_assemblage().first, Wiring::y_equals_a()), testing::wired_formula());
  r.require(wired_dev <= 1e-12, "wired tripartite vs closed form " + num(wired_dev) + " <= 1e-12");
  std::mt19937_64 rng(101);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const Assemblage target = testing::random_single_box_assemblage(rng);
    worst = std::max(worst, max_abs_difference(apply_wiring(universal_initial_assemblage(target).first,
                                                            Wiring::y_equals_a()), target));
  }
  for (int k = 0; k < 50; ++k) {
    const Behavior target = random_wired_behavior(rng);
    worst = std::max(worst, max_abs_difference(apply_wiring_behavior(universal_initial_behavior(target).first,
                                                                     Wiring::y_equals_a()), target));
  }
  r.require(worst <= 1e-12, "universal exposures on 100 targets, max deviation " + num(worst) + " <= 1e-12");
}

Assemblage wired_ghz() { return apply_wiring(ghz_assemblage().first, Wiring::y_equals_a()); }

void witness_value(Result& r) {
  const double v = evaluate_witness(canonical_witnesses().steering, wired_ghz());
  r.require(std::abs(v - 1.0721) <= 1e-3, "steering witness " + num(v) + " = 1.0721 +- 1e-3");
}

void chsh_value(Result& r) {
  const double s = chsh_max(wired_ghz(), {(2.0 * pauli::Z() + pauli::X()) / std::sqrt(5.0), pauli::X()});
  r.require(std::abs(s - 2.28825) <= 1e-4, "CHSH " + num(s) + " = 2.28825 +- 1e-4");
}

std::string verdict(const ModelReport& m) {
  return std::string(m.feasible ? "feasible" : "infeasible") + (m.certificate_verified ? " (verified" : " (unverified") +
         (m.feasible ? ", gap " + num(m.gap, 2) + ")" : ")");
}

bool certified(const ModelReport& m, bool expect_feasible) {
  if (m.feasible != expect_feasible || !m.certificate_verified) return false;
  if (expect_feasible && m.gap > 1e-7) return false;
  for (const auto& s : m.sub_reports)
    if (expect_feasible && (!s.feasible || !s.certificate_verified || s.gap > 1e-7)) return false;
  return true;
}

void hierarchy(Result& r) {
  const Assemblage ghz = ghz_assemblage().first;
  const Assemblage w = noisy_w_assemblage(0.64);
  const ModelReport a = membership(ghz, ModelClass::kLHS);
  const ModelReport b = membership(ghz, ModelClass::kTOLHS);
  const ModelReport c = membership(w, ModelClass::kTOLHS);
  const ModelReport d = membership(w, ModelClass::kNSLHS);
  r.require(certified(a, true), "tripartite in lhs: " + verdict(a));
  r.require(certified(b, false), "tripartite in to-lhs: " + verdict(b));
  r.require(certified(c, true), "noisy-W(0.64) in to-lhs: " + verdict(c));
  r.require(certified(d, false), "noisy-W(0.64) in ns-lhs: " + verdict(d));
}

void ns_witness(Result& r) {
  const WitnessCertificate w = canonical_witnesses().ns_lhs;
  const double at = evaluate_witness(w, noisy_w_assemblage(0.64));
  const double f0 = evaluate_witness(w, noisy_w_assemblage(0.0)), f1 = evaluate_witness(w, noisy_w_assemblage(1.0));
  const double root = -f0 / (f1 - f0);
  r.require(std::abs(at - 0.0301) <= 2e-3, "value at v=0.64 " + num(at) + " = 0.0301 +- 2e-3");
  r.require(std::abs(root - 0.58) <= 0.01, "zero crossing v=" + num(root) + " = 0.58 +- 0.01");
}

void table_check(Result& r) {
  const TableReport t = verify_to_lhs_table();
  char buf[160];
  std::snprintf(buf, sizeof buf, "a->b deviation %.4f, b->a deviation %.4f <= 0.0020", t.deviation_ab, t.deviation_ba);
  r.require(t.deviation_ab <= 2e-3 && t.deviation_ba <= 2e-3, buf);
  std::snprintf(buf, sizeof buf, "hidden states min eigenvalue %.4f, trace sum %.4f", t.min_eigenvalue, t.trace_sum);
  r.require(t.min_eigenvalue >= -2e-3 && std::abs(t.trace_sum - 1) <= 2e-3, buf);
}

void steering_soundness(Result& r) {
  std::mt19937_64 rng(8);
  const WitnessCertificate w = canonical_witnesses().steering;
  double worst = -1e300;
  for (int k = 0; k < 1000; ++k)
    worst = std::max(worst, evaluate_witness(w, sample_member(ModelClass::kLHS, kSingle, rng, 1 + k % 6, k % 2 == 0)));
  r.require(worst <= 1 + 1e-8, "max over 1000 single-box lhs samples " + num(worst, 10) + " <= 1 + 1e-8");
}

void ns_soundness(Result& r) {
  std::mt19937_64 rng(9);
  const WitnessCertificate w = canonical_witnesses().ns_lhs;
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < 1000; ++k) {
    const double v = evaluate_witness(w, sample_member(ModelClass::kNSLHS, kPair, rng, 1 + k % 6, k % 2 == 0));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  r.require(lo >= -1 - 1e-6 && hi <= 2e-3,
            "range over 1000 ns-lhs samples [" + num(lo) + ", " + num(hi) + "] within [-1-1e-6, 2e-3]");
}

void wiring_consistency(Result& r) {
  std::mt19937_64 rng(10);
  int feasible_inputs = 0, local_outputs = 0;
  for (int k = 0; k < 200; ++k) {
    const Assemblage a = sample_member(ModelClass::kTOAtoB, kPair, rng, 1 + k % 5, k % 2 == 0);
    feasible_inputs += membership(a, ModelClass::kTOAtoB).feasible;
    local_outputs += membership(apply_wiring(a, Wiring::y_equals_a()), ModelClass::kLHS).feasible;
  }
  r.require(feasible_inputs == 200, std::to_string(feasible_inputs) + "/200 inputs certified to-ab");
  r.require(local_outputs == 200, std::to_string(local_outputs) + "/200 wired outputs single-box lhs");
}

void robustness_consistency(Result& r) {
  std::mt19937_64 rng(11);
  const ModelClass classes[] = {ModelClass::kLHS, ModelClass::kTOAtoB, ModelClass::kTOBtoA, ModelClass::kTOLHS,
                                ModelClass::kNSLHS};
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0, members = 0;
  for (int k = 0; k < 200; ++k) {
    const ModelClass test = classes[k % 5];
    Assemblage a;
    switch ((k / 5) % 4) {
      case 0: a = sample_member(test, kPair, rng, 1 + k % 4, k % 3 == 0); break;
      case 1: a = testing::random_quantum_assemblage(rng); break;
      case 2: a = noisy_w_assemblage(u(rng)); break;
      default: a = mix(ghz_assemblage().first, testing::random_quantum_assemblage(rng), u(rng)); break;
    }
    const bool member = membership(a, test).feasible;
    const RobustnessResult rob = robustness(a, test);
    agree += member == (rob.value <= 1e-6);
    members += member;
  }
  r.require(agree == 200, std::to_string(agree) + "/200 cases agree (robustness <= 1e-6 iff member; " +
                              std::to_string(members) + " members)");
}

PipelineResult run_pipeline(double flux, int seeds) {
  PipelineOptions o;
  o.flux = flux;
  o.seeds = seeds;
  o.base_seed = 1;
  return pipeline_histograms(ghz_assemblage().first, o);
}

void pipeline_robustness(Result& r) {
  const PipelineResult p = run_pipeline(1e3, 500);
  r.require(p.robustness_summary.median <= 1e-3,
            "N=1e3, 500 seeds: median lhs-robustness " + num(p.robustness_summary.median) + " <= 1e-3");
}

void pipeline_witness(Result& r) {
  const PipelineResult low = run_pipeline(1e3, 500);
  const PipelineResult high = run_pipeline(1e5, 100);
  const double m3 = low.witness_summary.mean, m5 = high.witness_summary.mean;
  r.require(m3 >= 1.05 && m3 <= 1.09, "N=1e3, 500 seeds: witness mean " + num(m3) + " in [1.05, 1.09]");
  r.require(std::abs(m5 - 1.0721) < std::abs(m3 - 1.0721) && std::abs(m5 - 1.0721) <= 1e-3,
            "N=1e5, 100 seeds: witness mean " + num(m5) + " within 1e-3 of 1.0721 and closer than at 1e3");
}

void gms(Result& r) {
  GmsOptions third;
  third.bipartition_terms = false;
  const ModelReport w = gms_membership(noisy_w_assemblage(0.64), third);
  r.require(w.feasible && w.decomposition && check_decomposition(*w.decomposition, noisy_w_assemblage(0.64)).ok,
            "noisy-W(0.64) accepted through the time-ordered term alone");
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  int accepted = 0;
  for (int k = 0; k < 100; ++k) {
    const Assemblage a = testing::product_split(testing::random_local_box(rng), testing::random_single_box_assemblage(rng), true);
    const Assemblage b = testing::product_split(testing::random_local_box(rng), testing::random_single_box_assemblage(rng), false);
    const Assemblage t = sample_member(ModelClass::kTOLHS, kPair, rng, 1 + k % 4);
    Assemblage s;
    switch (k % 4) {
      case 0: s = a; break;
      case 1: s = b; break;
      case 2: s = t; break;
      default: {
        const double wa = u(rng), wb = u(rng), wt = u(rng), total = wa + wb + wt;
        s = mix(mix(a, b, wa / (wa + wb)), t, (wa + wb) / total);
      }
    }
    accepted += gms_membership(s).feasible;
  }
  r.require(accepted == 100, std::to_string(accepted) + "/100 biseparable constructions accepted");
}

struct Criterion {
  std::string id;
  std::string name;
  std::function<void(Result&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"1", "canonical recomposition", canonical_recomposition},
      {"2", "exposure identity", exposure_identity},
      {"3", "wired steering witness value", witness_value},
      {"4", "wired CHSH value", chsh_value},
      {"5", "hierarchy separations", hierarchy},
      {"6", "no-signaling witness", ns_witness},
      {"7", "time-ordered table", table_check},
      {"8a", "steering witness soundness", steering_soundness},
      {"8b", "no-signaling witness soundness", ns_soundness},
      {"9", "wiring consistency", wiring_consistency},
      {"10", "robustness consistency", robustness_consistency},
      {"11a", "photocount pipeline robustness", pipeline_robustness},
      {"11b", "photocount pipeline witness", pipeline_witness},
      {"12", "genuine multipartite steering", gms},
  };
  return all;
}

}  // namespace
}  // namespace steerkit

int main(int argc, char** argv) {
  using namespace steerkit;
  std::vector<std::string> wanted(argv + 1, argv + argc);
  for (const auto& w : wanted)
    if (std::none_of(criteria().begin(), criteria().end(), [&](const auto& c) { return c.id == w; })) {
      std::cerr << "unknown criterion " << w << '\n';
      return 2;
    }
  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Result r;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << ": " << r.detail.str() << " ("
              << num(secs, 3) << " s)" << std::endl;
  }
  return all_pass ? 0 : 1;
}
