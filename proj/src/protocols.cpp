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

#include "steerkit/protocols.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

#include "steerkit/error.hpp"
#include "steerkit/io.hpp"
#include "steerkit/strategies.hpp"

namespace steerkit {

namespace {

HermitianOperator real_symmetric(double a, double b, double c) {
  Eigen::MatrixXcd m(2, 2);
  m << a, b, b, c;
  return HermitianOperator::from_matrix(m);
}

void require_binary(const Scenario& s, int parties, const char* what) {
  if (s.n_untrusted != parties) throw InvalidInput(std::string(what) + ": wrong number of parties");
  for (int k = 0; k < parties; ++k)
    if (s.inputs_per_party[static_cast<std::size_t>(k)] != 2 || s.outputs_per_party[static_cast<std::size_t>(k)] != 2)
      throw InvalidInput(std::string(what) + ": inputs and outcomes must be binary");
}

/// Behavior of one hidden variable on two binary boxes.
Behavior pair_behavior(const std::function<double(int, int, int, int)>& p) {
  Behavior out = make_behavior(Scenario::binary(2, 0));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.at({a, b}, {x, y}) = p(a, b, x, y);
  return out;
}

Eigen::MatrixXcd reduce_to_last_qubit(const Eigen::MatrixXcd& full) {
  Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(2, 2);
  for (int k = 0; k < 4; ++k) red += full.block(2 * k, 2 * k, 2, 2);
  return (red + red.adjoint()) / 2.0;
}

/// sigma_{a,b|x,y} from a three-qubit state with measurement effects on the first two.
Assemblage measure_pair(const Eigen::MatrixXcd& rho, const std::array<std::array<Eigen::MatrixXcd, 2>, 2>& ma,
                        const std::array<std::array<Eigen::MatrixXcd, 2>, 2>& mb) {
  Assemblage out = make_assemblage(Scenario::binary(2, 2));
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const Eigen::MatrixXcd m =
              Eigen::kroneckerProduct(Eigen::kroneckerProduct(ma[x][a], mb[y][b]).eval(), id).eval();
          out.at({a, b}, {x, y}) = HermitianOperator::from_matrix(reduce_to_last_qubit(m * rho * m.adjoint()));
        }
  return out;
}

std::array<Eigen::MatrixXcd, 2> observable_projectors(const Eigen::MatrixXcd& o) {
  const auto povm = observable_povm(HermitianOperator::from_matrix(o));
  return {povm[0].matrix(), povm[1].matrix()};
}

}  // namespace

std::pair<Assemblage, CanonicalModel> universal_initial_assemblage(const Assemblage& target) {
  require_binary(target.scenario(), 1, "universal initial assemblage");
  const int d = target.scenario().trusted_dim;
  Assemblage out = make_assemblage(Scenario::binary(2, d));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out.at({a, b}, {x, y}) = target.at({b}, {x ^ a ^ y}) / 2.0;

  Decomposition dec;
  for (int l0 = 0; l0 < 2; ++l0)
    for (int l1 = 0; l1 < 2; ++l1) {
      const HermitianOperator& s = target.at({l0}, {l1});
      const double tr = s.trace();
      if (tr <= 0) continue;
      dec.labels.push_back("lambda=" + std::to_string(l0) + std::to_string(l1));
      dec.weights.push_back(tr / 2);
      dec.hidden_states.push_back(s / tr);
      dec.strategies.push_back(pair_behavior([=](int a, int b, int x, int y) {
        return (b == l0 && l1 == (x ^ a ^ y)) ? 1.0 : 0.0;
      }));
    }
  return {out, CanonicalModel{"universal-assemblage", dec, std::nullopt}};
}

std::pair<Behavior, CanonicalModel> universal_initial_behavior(const Behavior& target) {
  require_binary(target.scenario(), 2, "universal initial behavior");
  Behavior out = make_behavior(Scenario::binary(3, 0));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) out.at({a, b, c}, {x, y, z}) = target.at({b, c}, {x ^ a ^ y, z}) / 2.0;

  LhvDecomposition dec;
  Scenario last;
  last.n_untrusted = 1;
  last.inputs_per_party = {2};
  last.outputs_per_party = {2};
  for (int l0 = 0; l0 < 2; ++l0)
    for (int l1 = 0; l1 < 2; ++l1) {
      // Marginal of the first target party, read at z = 0 (the target is no-signaling).
      const double marginal = target.at({l0, 0}, {l1, 0}) + target.at({l0, 1}, {l1, 0});
      if (marginal <= 0) continue;
      Behavior pc = make_behavior(last);
      for (int z = 0; z < 2; ++z)
        for (int c = 0; c < 2; ++c) pc.at({c}, {z}) = target.at({l0, c}, {l1, z}) / marginal;
      dec.labels.push_back("lambda=" + std::to_string(l0) + std::to_string(l1));
      dec.weights.push_back(marginal / 2);
      dec.untrusted.push_back(pair_behavior([=](int a, int b, int x, int y) {
        return (b == l0 && l1 == (x ^ a ^ y)) ? 1.0 : 0.0;
      }));
      dec.last.push_back(std::move(pc));
    }
  return {out, CanonicalModel{"universal-behavior", std::nullopt, dec}};
}

std::pair<Assemblage, CanonicalModel> ghz_assemblage() {
  Assemblage out = make_assemblage(Scenario::binary(2, 2));
  const double r = 1 / std::sqrt(2.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double sb = b ? -1 : 1, sa = (a + y) % 2 ? -1 : 1;
          out.at({a, b}, {x, y}) = (pauli::I() + (sb * r) * (pauli::Z() + (x * sa) * pauli::X())) / 8.0;
        }

  Decomposition dec;
  for (int l0 = 0; l0 < 2; ++l0)
    for (int l1 = 0; l1 < 2; ++l1) {
      const double s0 = l0 ? -1 : 1, s1 = l1 ? -1 : 1;
      dec.labels.push_back("lambda=" + std::to_string(l0) + std::to_string(l1));
      dec.weights.push_back(0.25);
      dec.hidden_states.push_back(pauli::I() / 2.0 + (s0 * r / 2) * (pauli::Z() + s1 * pauli::X()));
      dec.strategies.push_back(pair_behavior([=](int a, int b, int x, int y) {
        if (b != l0) return 0.0;
        return (1 + x * (((a + y + l1) % 2) ? -1.0 : 1.0)) / 2;
      }));
    }
  return {out, CanonicalModel{"ghz", dec, std::nullopt}};
}

Assemblage ghz_assemblage_from_state() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = psi(7) = 1 / std::sqrt(2.0);
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  std::array<std::array<Eigen::MatrixXcd, 2>, 2> ma{{{half, half}, observable_projectors(pauli::X().matrix())}};
  std::array<std::array<Eigen::MatrixXcd, 2>, 2> mb{
      {observable_projectors((pauli::Z().matrix() + pauli::X().matrix()) / std::sqrt(2.0)),
       observable_projectors((pauli::Z().matrix() - pauli::X().matrix()) / std::sqrt(2.0))}};
  // Alice's trivial effects act as M, so the state is scaled by M^2 = I/4;
  // rescale to the POVM {I/2, I/2}.
  Assemblage out = measure_pair(rho, ma, mb);
  for (int y = 0; y < 2; ++y)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out.at({a, b}, {0, y}) *= 2.0;
  return out;
}

namespace {

/// sigma^W_{a,b|x,y} from the closed forms in eta; (x,y) = (1,0) follows by symmetry.
HermitianOperator w_element(int a, int b, int x, int y) {
  if (x == 1 && y == 0) return w_element(b, a, 0, 1);
  const double e = kWEta, r = std::sqrt(1 - e * e);
  struct Entry {
    double p, q, s, den;
  };
  Entry t{};
  const int key = ((a * 2 + b) << 2) | (x * 2 + y);
  switch (key) {
    case (0 << 2) | 0: t = {2 * e * e, 1 + r - e * e / 2, e * (1 + r), 6}; break;
    case (1 << 2) | 0:
    case (2 << 2) | 0: t = {2 * (1 - e * e), e * e / 2, -e * r, 6}; break;
    case (3 << 2) | 0: t = {2 * e * e, 1 - r - e * e / 2, -e * (1 - r), 6}; break;
    case (0 << 2) | 1: t = {2 * (1 + 2 * e * r), 1 - e + r - e * r, 1 + e + r - 2 * e * e, 12}; break;
    case (1 << 2) | 1: t = {2 * (1 - 2 * e * r), 1 + e + r + e * r, -(1 - e + r - 2 * e * e), 12}; break;
    case (2 << 2) | 1: t = {2 * (1 - 2 * e * r), 1 - e - r + e * r, -(1 + e - r - 2 * e * e), 12}; break;
    case (3 << 2) | 1: t = {2 * (1 + 2 * e * r), 1 + e - r - e * r, 1 - e - r - 2 * e * e, 12}; break;
    case (0 << 2) | 3: t = {2 * (1 - e * e), 1 - e - (1 - e * e) / 2, r * (1 - e), 6}; break;
    case (1 << 2) | 3:
    case (2 << 2) | 3: t = {2 * e * e, (1 - e * e) / 2, e * r, 6}; break;
    case (3 << 2) | 3: t = {2 * (1 - e * e), 1 + e - (1 - e * e) / 2, -r * (1 + e), 6}; break;
    default: break;
  }
  return real_symmetric(t.p / t.den, t.s / t.den, t.q / t.den);
}

void check_visibility(double v) {
  if (!(v >= 0 && v <= 1)) throw InvalidInput("visibility must lie in [0, 1]");
}

}  // namespace

Assemblage noisy_w_assemblage(double v) {
  check_visibility(v);
  Assemblage out = make_assemblage(Scenario::binary(2, 2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out.at({a, b}, {x, y}) = v * w_element(a, b, x, y) + ((1 - v) / 8) * pauli::I();
  return out;
}

Assemblage noisy_w_from_state(double v) {
  check_visibility(v);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(1) = psi(2) = psi(4) = 1 / std::sqrt(3.0);
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  const double e = kWEta, r = std::sqrt(1 - e * e);
  const Eigen::MatrixXcd x = pauli::X().matrix(), z = pauli::Z().matrix();
  std::array<std::array<Eigen::MatrixXcd, 2>, 2> m{
      {observable_projectors(e * x + r * z), observable_projectors(r * x - e * z)}};
  Assemblage w = measure_pair(rho, m, m);
  for (auto& s : w.elements()) s = v * s + ((1 - v) / 8) * pauli::I();
  return w;
}

namespace {

WitnessCertificate steering_witness(double c, double q) {
  const double p = (1 + 1 / std::sqrt(5.0)) / 2;
  WitnessCertificate w;
  w.blocks = make_assemblage(Scenario::binary(1, 2));
  w.blocks.at({0}, {0}) = real_symmetric(p, -c, 1 - p);
  w.blocks.at({0}, {1}) = real_symmetric(q, p / 2, -q);
  for (int x = 0; x < 2; ++x) w.blocks.at({1}, {x}) = w.blocks.at({0}, {x}).conjugated(pauli::Y().matrix());
  w.model = to_string(ModelClass::kLHS);
  w.bound = 1;
  w.normalization = "fixed";
  return w;
}

}  // namespace

CanonicalWitnesses canonical_witnesses() {
  CanonicalWitnesses out;
  // Closed forms of the printed constants 0.1382 and 0.2236.
  out.steering = steering_witness((1 - 1 / std::sqrt(5.0)) / 4, 1 / (2 * std::sqrt(5.0)));

  // Rows (x, y); within a row (a, b) = 00, 01, 10, 11; entries (m00, m01, m11).
  static constexpr double kTable[4][4][3] = {
      {{-0.0056, 0.1194, -0.1205}, {-0.1394, -0.0603, 0.0662}, {-0.1394, -0.0603, 0.0662}, {0.0239, -0.0656, -0.1869}},
      {{0.0233, -0.0324, -0.1706}, {-0.2194, 0.1346, -0.0079}, {-0.0560, 0.1109, 0.0114}, {-0.0417, -0.1490, -0.1079}},
      {{0.0233, -0.0324, -0.1706}, {-0.0560, 0.1109, 0.0114}, {-0.2194, 0.1346, -0.0079}, {-0.0417, -0.1490, -0.1079}},
      {{-0.0410, -0.0560, 0.0863}, {0.0665, 0.0431, -0.2194}, {0.0665, 0.0431, -0.2194}, {-0.4431, -0.0727, 0.0239}}};
  WitnessCertificate& w = out.ns_lhs;
  w.blocks = make_assemblage(Scenario::binary(2, 2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double* e = kTable[x * 2 + y][a * 2 + b];
          w.blocks.at({a, b}, {x, y}) = real_symmetric(e[0], e[1], e[2]);
        }
  w.model = to_string(ModelClass::kNSLHS);
  w.bound = 0;
  w.normalization = "fixed";
  return out;
}

WitnessCertificate printed_steering_witness() { return steering_witness(0.1382, 0.2236); }

double chsh_max(const Assemblage& a, const std::array<HermitianOperator, 2>& observables) {
  require_binary(a.scenario(), 1, "chsh");
  std::vector<std::vector<HermitianOperator>> povms;
  for (const auto& o : observables) {
    const double scale = std::max(std::abs(min_eigenvalue(o)), std::abs(max_eigenvalue(o)));
    if (scale <= 0) throw InvalidInput("observable must be nonzero");
    povms.push_back(observable_povm(o / scale));
  }
  const Behavior p = behavior_from_assemblage(a, povms);
  double e[2][2];
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      e[x][z] = 0;
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) e[x][z] += ((b + c) % 2 ? -1.0 : 1.0) * p.at({b, c}, {x, z});
    }
  // One minus sign in one of four places; the three-minus variants are negatives.
  double best = 0;
  for (int flip = 0; flip < 4; ++flip) {
    double s = 0;
    for (int k = 0; k < 4; ++k) s += (k == flip ? -1.0 : 1.0) * e[k / 2][k % 2];
    best = std::max(best, std::abs(s));
  }
  return best;
}

TableReport verify_to_lhs_table(double tolerance) {
  // Hidden states sigma_lambda as (m00, m01, m11), lambda in reading order.
  static constexpr double kStates[64][3] = {
      {0.0045, 0.0013, 0.0009},  {0.0928, 0.0246, 0.0070},  {0.0036, 0.0011, 0.0009},  {0.0244, 0.0068, 0.0024},
      {0.0055, 0.0058, 0.0071},  {0.0084, 0.0071, 0.0067},  {0.0066, 0.0076, 0.0098},  {0.0100, 0.0090, 0.0089},
      {0.0048, -0.0029, 0.0025}, {0.0118, -0.0052, 0.0029}, {0.0040, -0.0026, 0.0024}, {0.0079, -0.0037, 0.0024},
      {0.0007, -0.0004, 0.0024}, {0.0008, -0.0002, 0.0014}, {0.0006, -0.0004, 0.0029}, {0.0007, -0.0002, 0.0015},
      {0.0219, 0.0118, 0.0064},  {0.0001, 0.0002, 0.0010},  {0.0028, -0.0005, 0.0001}, {0.0002, -0.0002, 0.0004},
      {0.0612, 0.0411, 0.0277},  {0.0034, 0.0126, 0.0467},  {0.0007, -0.0001, 0.0001}, {0.0002, -0.0002, 0.0004},
      {0.0007, 0.0003, 0.0002},  {0.0001, 0.0001, 0.0010},  {0.0135, -0.0036, 0.0010}, {0.0074, -0.0106, 0.0153},
      {0.0006, 0.0003, 0.0003},  {0.0010, 0.0073, 0.0545},  {0.0008, -0.0002, 0.0001}, {0.0015, -0.0025, 0.0045},
      {0.0020, 0.0006, 0.0016},  {0.0049, 0.0013, 0.0013},  {0.0017, 0.0006, 0.0018},  {0.0038, 0.0011, 0.0014},
      {0.0020, -0.0013, 0.0022}, {0.0031, -0.0012, 0.0014}, {0.0018, -0.0013, 0.0024}, {0.0026, -0.0011, 0.0015},
      {0.0037, -0.0000, 0.0009}, {0.0261, 0.0009, 0.0007},  {0.0029, -0.0000, 0.0010}, {0.0125, 0.0005, 0.0008},
      {0.0069, -0.0040, 0.0032}, {0.0227, -0.0094, 0.0045}, {0.0055, -0.0034, 0.0030}, {0.0140, -0.0060, 0.0033},
      {0.0062, 0.0036, 0.0022},  {0.0011, 0.0051, 0.0258},  {0.0031, -0.0006, 0.0002}, {0.0007, -0.0011, 0.0018},
      {0.0009, 0.0005, 0.0003},  {0.0001, 0.0005, 0.0034},  {0.0035, -0.0008, 0.0003}, {0.0193, -0.0303, 0.0479},
      {0.0044, 0.0023, 0.0013},  {0.0002, 0.0004, 0.0024},  {0.0287, -0.0055, 0.0011}, {0.0008, -0.0011, 0.0018},
      {0.0008, 0.0004, 0.0003},  {0.0001, 0.0002, 0.0015},  {0.0967, -0.0246, 0.0063}, {0.0206, -0.0300, 0.0440}};
  const Scenario s = Scenario::binary(2, 2);
  const Assemblage target = noisy_w_assemblage(0.64);
  const auto ab = enumerate_strategies(ModelClass::kTOAtoB, s);
  const auto ba = enumerate_strategies(ModelClass::kTOBtoA, s);
  TableReport r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int l = 0; l < 64; ++l) {
    const HermitianOperator sigma = real_symmetric(kStates[l][0], kStates[l][1], kStates[l][2]);
    const double w = sigma.trace();
    r.trace_sum += w;
    r.min_eigenvalue = std::min(r.min_eigenvalue, min_eigenvalue(sigma));
    for (auto [dec, st] : {std::pair{&r.decomposition_ab, &ab}, std::pair{&r.decomposition_ba, &ba}}) {
      dec->labels.push_back((*st)[static_cast<std::size_t>(l)].label);
      dec->weights.push_back(w);
      dec->strategies.push_back((*st)[static_cast<std::size_t>(l)].behavior);
      dec->hidden_states.push_back(sigma / w);
    }
  }
  r.deviation_ab = max_abs_difference(recompose(r.decomposition_ab, s), target);
  r.deviation_ba = max_abs_difference(recompose(r.decomposition_ba, s), target);
  r.passed = r.deviation_ab <= tolerance && r.deviation_ba <= tolerance;
  return r;
}

nlohmann::json to_json(const CanonicalModel& m) {
  nlohmann::json j = {{"kind", m.kind}};
  if (m.lhs) j["lhs"] = to_json(*m.lhs);
  if (m.lhv) j["lhv"] = to_json(*m.lhv);
  return j;
}

nlohmann::json to_json(const TableReport& r) {
  return {{"deviation_ab", r.deviation_ab},
          {"deviation_ba", r.deviation_ba},
          {"min_eigenvalue", r.min_eigenvalue},
          {"trace_sum", r.trace_sum},
          {"passed", r.passed}};
}

}  // namespace steerkit
