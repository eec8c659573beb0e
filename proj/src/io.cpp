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

#include "steerkit/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace steerkit::io {

json to_json(const HermitianOperator& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"re", re}, {"im", im}};
}

json to_json(const Scenario& s) {
  return {{"n_untrusted", s.n_untrusted},
          {"inputs_per_party", s.inputs_per_party},
          {"outputs_per_party", s.outputs_per_party},
          {"trusted_dim", s.trusted_dim}};
}

namespace {

template <typename T, typename F>
json table_to_json(const CorrelationTable<T>& t, const std::string& provenance, const char* key, F payload) {
  json elements = json::array();
  for (std::size_t x = 0; x < t.num_inputs(); ++x)
    for (std::size_t a = 0; a < t.num_outcomes(); ++a)
      elements.push_back({{"a", t.scenario().outcome_tuple(a)},
                          {"x", t.scenario().input_tuple(x)},
                          {key, payload(t.at(a, x))}});
  json j = {{"scenario", to_json(t.scenario())}, {"elements", elements}};
  if (!provenance.empty()) j["provenance"] = provenance;
  return j;
}

const json& member(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw ParseError(at.empty() ? "/" : at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(at + "/" + key, "missing required field");
  return *it;
}

int as_int(const json& j, const std::string& at) {
  if (!j.is_number_integer()) throw ParseError(at, "expected an integer");
  return j.get<int>();
}

double as_number(const json& j, const std::string& at) {
  if (!j.is_number()) throw ParseError(at, "expected a number");
  return j.get<double>();
}

std::vector<int> int_list(const json& j, const std::string& at) {
  if (!j.is_array()) throw ParseError(at, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], at + "/" + std::to_string(i)));
  return out;
}

template <typename T, typename F>
CorrelationTable<T> table_from_json(const json& j, const std::string& at, const char* key, Scenario s,
                                    const T& zero, F parse_payload) {
  CorrelationTable<T> t(s, zero);
  const std::string ep = at + "/elements";
  const json& elements = member(j, "elements", at);
  if (!elements.is_array()) throw ParseError(ep, "expected an array");
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string p = ep + "/" + std::to_string(i);
    const auto a = int_list(member(elements[i], "a", p), p + "/a");
    const auto x = int_list(member(elements[i], "x", p), p + "/x");
    std::size_t ai, xi;
    try {
      ai = s.outcome_index(a);
      xi = s.input_index(x);
    } catch (const DimensionError& e) {
      throw ParseError(p, std::string("index tuple does not fit the scenario: ") + e.what());
    }
    if (!seen.insert(xi * t.num_outcomes() + ai).second) throw ParseError(p, "duplicate element");
    t.at(ai, xi) = parse_payload(member(elements[i], key, p), p + "/" + key);
  }
  if (seen.size() != t.elements().size()) {
    throw StructuralError("incomplete table at " + ep + ": " + std::to_string(seen.size()) + " of " +
                          std::to_string(t.elements().size()) + " elements present");
  }
  return t;
}

}  // namespace

json to_json(const Assemblage& a, const std::string& provenance) {
  return table_to_json(a, provenance, "op", [](const HermitianOperator& m) { return to_json(m); });
}

json to_json(const Behavior& p, const std::string& provenance) {
  return table_to_json(p, provenance, "p", [](double v) { return json(v); });
}

json to_json(const Wiring& w) {
  return {{"ordering", w.ordering},     {"final_inputs", w.final_inputs}, {"final_outputs", w.final_outputs},
          {"input_maps", w.input_maps}, {"output_map", w.output_map}};
}

HermitianOperator operator_from_json(const json& j, const std::string& at) {
  const json& re = member(j, "re", at);
  const json& im = member(j, "im", at);
  if (!re.is_array() || re.empty()) throw ParseError(at + "/re", "expected a non-empty square array");
  const std::size_t d = re.size();
  if (!im.is_array() || im.size() != d) throw ParseError(at + "/im", "shape differs from re");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    const std::string rp = at + "/re/" + std::to_string(r), ip = at + "/im/" + std::to_string(r);
    if (!re[r].is_array() || re[r].size() != d) throw ParseError(rp, "row length differs from row count");
    if (!im[r].is_array() || im[r].size() != d) throw ParseError(ip, "row length differs from row count");
    for (std::size_t c = 0; c < d; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
          as_number(re[r][c], rp + "/" + std::to_string(c)), as_number(im[r][c], ip + "/" + std::to_string(c))};
    }
  }
  try {
    return HermitianOperator::from_matrix(m, 1e-9);
  } catch (const Error& e) {
    throw ParseError(at, e.what());
  }
}

Scenario scenario_from_json(const json& j, const std::string& at) {
  Scenario s;
  s.n_untrusted = as_int(member(j, "n_untrusted", at), at + "/n_untrusted");
  s.inputs_per_party = int_list(member(j, "inputs_per_party", at), at + "/inputs_per_party");
  s.outputs_per_party = int_list(member(j, "outputs_per_party", at), at + "/outputs_per_party");
  s.trusted_dim = as_int(member(j, "trusted_dim", at), at + "/trusted_dim");
  try {
    s.check();
  } catch (const DimensionError& e) {
    throw ParseError(at, e.what());
  }
  return s;
}

Assemblage assemblage_from_json(const json& j, const std::string& at) {
  Scenario s = scenario_from_json(member(j, "scenario", at), at + "/scenario");
  if (s.trusted_dim < 1) throw ParseError(at + "/scenario/trusted_dim", "an assemblage needs trusted_dim >= 1");
  const int d = s.trusted_dim;
  return table_from_json(j, at, "op", s, HermitianOperator::zero(d),
                         [d](const json& payload, const std::string& p) {
                           HermitianOperator m = operator_from_json(payload, p);
                           if (m.dim() != d) throw ParseError(p, "operator dimension differs from trusted_dim");
                           return m;
                         });
}

Behavior behavior_from_json(const json& j, const std::string& at) {
  Scenario s = scenario_from_json(member(j, "scenario", at), at + "/scenario");
  s.trusted_dim = 0;
  return table_from_json(j, at, "p", s, 0.0, [](const json& payload, const std::string& p) {
    return as_number(payload, p);
  });
}

Wiring wiring_from_json(const json& j, const std::string& at) {
  Wiring w;
  w.ordering = int_list(member(j, "ordering", at), at + "/ordering");
  w.final_inputs = int_list(member(j, "final_inputs", at), at + "/final_inputs");
  w.final_outputs = int_list(member(j, "final_outputs", at), at + "/final_outputs");
  const json& maps = member(j, "input_maps", at);
  if (!maps.is_array()) throw ParseError(at + "/input_maps", "expected an array");
  for (std::size_t k = 0; k < maps.size(); ++k)
    w.input_maps.push_back(int_list(maps[k], at + "/input_maps/" + std::to_string(k)));
  w.output_map = int_list(member(j, "output_map", at), at + "/output_map");
  return w;
}

bool is_assemblage_document(const json& j) {
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array() || j["elements"].empty()) {
    return j.is_object() && j.contains("scenario") && j["scenario"].is_object() &&
           j["scenario"].value("trusted_dim", 0) > 0;
  }
  return j["elements"][0].contains("op");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("", path.string() + ": malformed JSON at byte " + std::to_string(e.byte));
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace steerkit::io
