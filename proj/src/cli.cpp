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

#include "steerkit/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "steerkit/error.hpp"
#include "steerkit/experiment.hpp"
#include "steerkit/io.hpp"
#include "steerkit/membership.hpp"
#include "steerkit/protocols.hpp"

namespace steerkit {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", "cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return hex.str();
}

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

struct Options {
  std::string in, out, json_out, witness_path, witness_out, wiring_path, observables_path;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  double flux = 1e3;
  std::string cls = "lhs";
  std::string mode = "generalized";
  std::string pipeline_witness = "wired";
  int seeds = 500, threads = 0, bins = 20;
  double v = 0.64;
  bool wire = false, witness = false, third_only = false, from_state = false, compare_lhs = false;
};

struct Run {
  Options opt;
  std::ostream& out;
  json inputs = json::array();
  json outputs = json::array();

  json load(const std::string& path) {
    if (path.empty()) throw InvalidInput("an input file is required (--in)");
    inputs.push_back({{"path", path}, {"sha256", sha256_file(path)}});
    return io::read_json_file(path);
  }

  void write(const std::string& path, const json& j) {
    if (path.empty()) return;
    io::write_json_file(path, j);
    outputs.push_back(path);
  }

  /// The full-precision twin of everything printed.
  void twin(const json& result) { write(opt.json_out, result); }

  void line(const std::string& key, double value) { out << key << ": " << fmt(value) << '\n'; }
  void line(const std::string& key, const std::string& value) { out << key << ": " << value << '\n'; }
};

const std::string kProvenance = "steerkit";

SolverSettings solver_settings() { return {}; }

json settings_json(const SolverSettings& s) {
  return {{"max_iterations", s.max_iterations}, {"feasibility_tol", s.feasibility_tol}, {"gap_tol", s.gap_tol},
          {"step_fraction", s.step_fraction}, {"stall_relaxation", s.stall_relaxation}, {"rank_tol", s.rank_tol}};
}

int verdict_code(const ModelReport& r) {
  if (r.feasible) return kExitOk;
  if (r.status == SolveStatus::kInfeasible || r.witness) return kExitVerdict;
  throw SolverFailure("membership program ended with status " + to_string(r.status));
}

void print_report(Run& run, const ModelReport& r) {
  run.line("model", r.model);
  run.line("verdict", r.feasible ? "feasible" : "infeasible");
  run.line("certificate verified", r.certificate_verified ? "yes" : "no");
  if (r.feasible) run.line("duality gap", r.gap);
  if (r.witness) {
    run.line("witness value", r.witness->value_on_target);
    run.line("witness bound", r.witness->bound);
  }
  for (const auto& s : r.sub_reports) run.line("  " + s.model, s.feasible ? "feasible" : "infeasible");
  for (std::size_t k = 0; k < r.term_weights.size(); ++k) run.line("term weight " + std::to_string(k), r.term_weights[k]);
}

int cmd_validate(Run& run) {
  const json doc = run.load(run.opt.in);
  const double tol = run.opt.tol.value_or(kDefaultTolerances.equality);
  json result = {{"tolerance", tol}, {"violations", json::array()}};
  const ValidationReport all = io::is_assemblage_document(doc) ? validate(io::assemblage_from_json(doc), tol)
                                                                : validate(io::behavior_from_json(doc), tol);
  for (const auto& v : all.violations) {
    result["violations"].push_back({{"kind", to_string(v.kind)}, {"party", v.party}, {"magnitude", v.magnitude}});
    run.line("violation " + to_string(v.kind) + (v.party >= 0 ? " party " + std::to_string(v.party) : ""), v.magnitude);
  }
  result["valid"] = all.valid();
  run.line("verdict", all.valid() ? "valid" : "violated");
  run.twin(result);
  return all.valid() ? kExitOk : kExitVerdict;
}

int cmd_wire(Run& run) {
  const json doc = run.load(run.opt.in);
  const Wiring w = run.opt.wiring_path.empty() ? Wiring::y_equals_a() : io::wiring_from_json(run.load(run.opt.wiring_path));
  json wired;
  if (io::is_assemblage_document(doc)) {
    const Assemblage a = apply_wiring(io::assemblage_from_json(doc), w);
    wired = io::to_json(a, kProvenance + " wire");
    run.line("wired parties", static_cast<double>(a.scenario().n_untrusted));
  } else {
    const Behavior p = apply_wiring_behavior(io::behavior_from_json(doc), w);
    wired = io::to_json(p, kProvenance + " wire");
    run.line("wired parties", static_cast<double>(p.scenario().n_untrusted));
  }
  run.write(run.opt.out, wired);
  run.twin(wired);
  return kExitOk;
}

int cmd_membership(Run& run) {
  const json doc = run.load(run.opt.in);
  const ModelClass c = model_class_from_string(run.opt.cls);
  const ModelReport r = io::is_assemblage_document(doc)
                            ? membership(io::assemblage_from_json(doc), c, solver_settings())
                            : behavior_membership(io::behavior_from_json(doc), c, solver_settings());
  print_report(run, r);
  const json j = to_json(r);
  run.write(run.opt.out, j);
  if (r.witness) run.write(run.opt.witness_out, to_json(*r.witness));
  run.twin(j);
  return verdict_code(r);
}

int cmd_robustness(Run& run) {
  const json doc = run.load(run.opt.in);
  if (!io::is_assemblage_document(doc)) throw InvalidInput("robustness is defined for assemblages only");
  const RobustnessResult r = robustness(io::assemblage_from_json(doc), model_class_from_string(run.opt.cls),
                                        noise_mode_from_string(run.opt.mode), solver_settings());
  if (r.status != SolveStatus::kOptimal) throw SolverFailure("robustness program ended with status " + to_string(r.status));
  run.line("robustness", r.value);
  run.line("dual value", r.dual_value);
  run.line("duality gap", r.gap);
  run.line("certificate verified", r.certificate_verified ? "yes" : "no");
  const json j = to_json(r);
  run.write(run.opt.out, j);
  if (r.witness) run.write(run.opt.witness_out, to_json(*r.witness));
  run.twin(j);
  return kExitOk;
}

int cmd_witness_eval(Run& run) {
  const json doc = run.load(run.opt.in);
  const WitnessCertificate w = witness_from_json(run.load(run.opt.witness_path));
  const double value = io::is_assemblage_document(doc) ? evaluate_witness(w, io::assemblage_from_json(doc))
                                                       : evaluate_witness(w, io::behavior_from_json(doc));
  const double tol = run.opt.tol.value_or(kDefaultTolerances.equality);
  const bool violated = value > w.bound + tol;
  run.line("witness value", value);
  run.line("bound", w.bound);
  run.line("verdict", violated ? "violated" : "satisfied");
  run.twin({{"value", value}, {"bound", w.bound}, {"model", w.model}, {"violated", violated}, {"tolerance", tol}});
  return violated ? kExitVerdict : kExitOk;
}

int cmd_witness_opt(Run& run) {
  const json doc = run.load(run.opt.in);
  if (!io::is_assemblage_document(doc)) throw InvalidInput("witness optimization is defined for assemblages only");
  const Assemblage a = io::assemblage_from_json(doc);
  const ModelClass c = model_class_from_string(run.opt.cls);
  const RobustnessResult r = robustness(a, c, NoiseMode::kGeneralized, solver_settings());
  if (r.status != SolveStatus::kOptimal) throw SolverFailure("robustness program ended with status " + to_string(r.status));
  if (r.value <= kDefaultTolerances.robustness_zero) {
    run.line("verdict", "member, no separating witness");
    run.twin({{"member", true}, {"robustness", r.value}});
    return kExitVerdict;
  }
  const WitnessCertificate w = optimal_witness(a, c, solver_settings());
  run.line("witness value", w.value_on_target);
  run.line("bound", w.bound);
  run.write(run.opt.out, to_json(w));
  run.write(run.opt.witness_out, to_json(w));
  run.twin({{"member", false}, {"robustness", r.value}, {"witness", to_json(w)}});
  return kExitOk;
}

std::array<HermitianOperator, 2> default_observables() {
  return {(2.0 * pauli::Z() + pauli::X()) / std::sqrt(5.0), pauli::X()};
}

int cmd_chsh(Run& run) {
  const Assemblage a = io::assemblage_from_json(run.load(run.opt.in));
  std::array<HermitianOperator, 2> obs = default_observables();
  if (!run.opt.observables_path.empty()) {
    const json j = run.load(run.opt.observables_path);
    if (!j.is_array() || j.size() != 2) throw ParseError("", "observables must be an array of two operators");
    for (std::size_t k = 0; k < 2; ++k) obs[k] = io::operator_from_json(j[k], "/" + std::to_string(k));
  }
  const double s = chsh_max(a, obs);
  run.line("chsh", s);
  run.line("local bound", 2.0);
  run.twin({{"chsh", s}, {"local_bound", 2.0}, {"observables", {io::to_json(obs[0]), io::to_json(obs[1])}}});
  return kExitOk;
}

int cmd_expose_universal(Run& run) {
  const json doc = run.load(run.opt.in);
  const double tol = run.opt.tol.value_or(1e-12);
  json result;
  double model_error = 0, exposure_error = 0;
  if (io::is_assemblage_document(doc)) {
    const Assemblage target = io::assemblage_from_json(doc);
    auto [initial, model] = universal_initial_assemblage(target);
    model_error = max_abs_difference(recompose(*model.lhs, initial.scenario()), initial);
    exposure_error = max_abs_difference(apply_wiring(initial, Wiring::y_equals_a()), target);
    result["initial"] = io::to_json(initial, kProvenance + " expose-universal");
    result["model"] = to_json(model);
    run.write(run.opt.out, result["initial"]);
  } else {
    const Behavior target = io::behavior_from_json(doc);
    auto [initial, model] = universal_initial_behavior(target);
    model_error = max_abs_difference(recompose(*model.lhv, initial.scenario()), initial);
    exposure_error = max_abs_difference(apply_wiring_behavior(initial, Wiring::y_equals_a()), target);
    result["initial"] = io::to_json(initial, kProvenance + " expose-universal");
    result["model"] = to_json(model);
    run.write(run.opt.out, result["initial"]);
  }
  result["model_recomposition_error"] = model_error;
  result["exposure_error"] = exposure_error;
  result["tolerance"] = tol;
  run.line("model recomposition error", model_error);
  run.line("exposure error", exposure_error);
  const bool ok = model_error <= tol && exposure_error <= tol;
  run.line("verdict", ok ? "exposed" : "mismatch");
  run.twin(result);
  return ok ? kExitOk : kExitVerdict;
}

int cmd_expose_ghz(Run& run) {
  auto [ghz, model] = ghz_assemblage();
  json result;
  const double model_error = max_abs_difference(recompose(*model.lhs, ghz.scenario()), ghz);
  run.line("model recomposition error", model_error);
  result["model_recomposition_error"] = model_error;
  result["model"] = to_json(model);
  if (!run.opt.wire) {
    result["assemblage"] = io::to_json(ghz, kProvenance + " expose-ghz");
    run.write(run.opt.out, result["assemblage"]);
    run.twin(result);
    return kExitOk;
  }
  const Assemblage wired = apply_wiring(ghz, Wiring::y_equals_a());
  result["wired"] = io::to_json(wired, kProvenance + " expose-ghz --wire");
  run.write(run.opt.out, result["wired"]);
  if (run.opt.witness) {
    const WitnessCertificate w = canonical_witnesses().steering;
    const double value = evaluate_witness(w, wired);
    run.line("witness", value);
    run.line("witness bound", w.bound);
    result["witness"] = {{"value", value}, {"bound", w.bound}};
  }
  const double s = chsh_max(wired, default_observables());
  run.line("chsh", s);
  result["chsh"] = s;
  run.twin(result);
  return kExitOk;
}

int cmd_noisy_w(Run& run) {
  if (run.opt.v < 0 || run.opt.v > 1) throw InvalidInput("visibility must lie in [0, 1]");
  const Assemblage a = run.opt.from_state ? noisy_w_from_state(run.opt.v) : noisy_w_assemblage(run.opt.v);
  const json j = io::to_json(a, kProvenance + " noisy-w");
  const double ns = evaluate_witness(canonical_witnesses().ns_lhs, a);
  run.line("visibility", run.opt.v);
  run.line("ns-lhs witness", ns);
  run.write(run.opt.out, j);
  run.twin({{"visibility", run.opt.v}, {"ns_lhs_witness", ns}, {"assemblage", j}});
  return kExitOk;
}

int cmd_gms(Run& run) {
  const Assemblage a = io::assemblage_from_json(run.load(run.opt.in));
  GmsOptions g;
  g.bipartition_terms = !run.opt.third_only;
  const ModelReport r = gms_membership(a, g, solver_settings());
  print_report(run, r);
  const json j = to_json(r);
  run.write(run.opt.out, j);
  if (r.witness) run.write(run.opt.witness_out, to_json(*r.witness));
  run.twin(j);
  return verdict_code(r);
}

int cmd_verify_canonical(Run& run) {
  const double tol = run.opt.tol.value_or(1e-12);
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, double value, double expected, double within) {
    const bool ok = std::abs(value - expected) <= within;
    all = all && ok;
    checks.push_back({{"name", name}, {"value", value}, {"expected", expected}, {"tolerance", within}, {"ok", ok}});
    run.out << (ok ? "ok   " : "FAIL ") << name << ": " << fmt(value) << " (expected " << fmt(expected) << " within "
            << fmt(within) << ")\n";
  };
  auto [ghz, model] = ghz_assemblage();
  check("ghz model recomposition", max_abs_difference(recompose(*model.lhs, ghz.scenario()), ghz), 0, tol);
  check("ghz closed form vs state", max_abs_difference(ghz, ghz_assemblage_from_state()), 0, 1e-12);
  check("noisy-w closed form vs state", max_abs_difference(noisy_w_assemblage(0.64), noisy_w_from_state(0.64)), 0,
        1e-12);
  const Assemblage wired = apply_wiring(ghz, Wiring::y_equals_a());
  const auto w = canonical_witnesses();
  check("wired steering witness", evaluate_witness(w.steering, wired), 1.0721, 1e-3);
  check("wired chsh", chsh_max(wired, default_observables()), 2.28825, 1e-4);
  check("ns-lhs witness on noisy-w(0.64)", evaluate_witness(w.ns_lhs, noisy_w_assemblage(0.64)), 0.0301, 2e-3);
  const TableReport t = verify_to_lhs_table();
  check("to-lhs table deviation a->b", t.deviation_ab, 0, 2e-3);
  check("to-lhs table deviation b->a", t.deviation_ba, 0, 2e-3);
  run.twin({{"checks", checks}, {"table", to_json(t)}});
  return all ? kExitOk : kExitVerdict;
}

int cmd_simulate(Run& run) {
  Assemblage source = run.opt.in.empty() ? ghz_assemblage().first : io::assemblage_from_json(run.load(run.opt.in));
  PipelineOptions p;
  p.flux = run.opt.flux;
  p.seeds = run.opt.seeds;
  p.base_seed = run.opt.seed;
  p.threads = resolve_thread_count(run.opt.threads);
  p.robustness_class = model_class_from_string(run.opt.cls);
  p.robustness_mode = noise_mode_from_string(run.opt.mode);
  if (run.opt.pipeline_witness == "wired") {
    p.witness = PipelineWitness::kWiredSteering;
  } else if (run.opt.pipeline_witness == "ns") {
    p.witness = PipelineWitness::kNoSignaling;
  } else {
    throw InvalidInput("unknown pipeline witness '" + run.opt.pipeline_witness + "'");
  }
  p.compare_lhs_fit = run.opt.compare_lhs;
  p.bins = run.opt.bins;
  if (p.flux <= 0 || p.seeds <= 0 || p.bins <= 0) throw InvalidInput("flux, seeds and bins must be positive");
  const PipelineResult r = pipeline_histograms(source, p);
  run.line("robustness median", r.robustness_summary.median);
  run.line("witness mean", r.witness_summary.mean);
  run.line("witness stddev", r.witness_summary.stddev);
  run.line("fidelity median", r.fidelity_summary.median);
  const json summary = to_json(r);
  if (!run.opt.out.empty()) {
    const std::filesystem::path dir(run.opt.out);
    std::filesystem::create_directories(dir);
    auto csv = [&](const std::string& name, const Histogram& h) {
      std::ofstream f(dir / name);
      write_histogram_csv(h, f);
      run.outputs.push_back((dir / name).string());
    };
    csv("robustness.csv", r.robustness);
    csv("witness.csv", r.witness);
    csv("fit_error_ns.csv", r.fit_error_ns);
    if (r.fit_error_lhs) csv("fit_error_lhs.csv", *r.fit_error_lhs);
    std::ofstream lines(dir / "records.jsonl");
    write_records_jsonl(r, lines);
    run.outputs.push_back((dir / "records.jsonl").string());
    run.write((dir / "summary.json").string(), summary);
  }
  run.twin(summary);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Run run{Options{}, out};
  Options& o = run.opt;
  CLI::App app{"steerkit: steering and nonlocality exposure toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto in = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--in", o.in, "input JSON (assemblage or behavior)");
    if (required) opt->required();
  };
  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "primary output path");
    c->add_option("--json", o.json_out, "full-precision JSON twin of the printed results");
    c->add_option("--tol", o.tol, "decision tolerance");
  };
  auto cls = [&](CLI::App* c) {
    c->add_option("--class", o.cls, "model class")->check(CLI::IsMember({"lhs", "to-ab", "to-ba", "to-lhs", "ns-lhs"}));
  };
  auto mode = [&](CLI::App* c) {
    c->add_option("--mode", o.mode, "noise mode")->check(CLI::IsMember({"mixed", "generalized"}));
  };

  std::vector<std::pair<CLI::App*, int (*)(Run&)>> commands;
  auto add = [&](const std::string& name, const std::string& help, int (*fn)(Run&)) {
    CLI::App* c = app.add_subcommand(name, help);
    common(c);
    commands.emplace_back(c, fn);
    return c;
  };

  in(add("validate", "check positivity, normalization and no-signaling", cmd_validate), true);
  {
    auto* c = add("wire", "apply a wiring (default: Bob's input is Alice's outcome)", cmd_wire);
    in(c, true);
    c->add_option("--wiring", o.wiring_path, "wiring JSON");
  }
  {
    auto* c = add("membership", "decide membership in a model class", cmd_membership);
    in(c, true);
    cls(c);
    c->add_option("--witness-out", o.witness_out, "write the separating witness here");
  }
  {
    auto* c = add("robustness", "robustness against a model class", cmd_robustness);
    in(c, true);
    cls(c);
    mode(c);
    c->add_option("--witness-out", o.witness_out, "write the dual witness here");
  }
  {
    auto* c = add("witness-eval", "evaluate a witness on an object", cmd_witness_eval);
    in(c, true);
    c->add_option("--witness", o.witness_path, "witness JSON")->required();
  }
  {
    auto* c = add("witness-opt", "optimal witness against a model class", cmd_witness_opt);
    in(c, true);
    cls(c);
    c->add_option("--witness-out", o.witness_out, "write the witness here");
  }
  {
    auto* c = add("chsh", "maximal CHSH value of a single-box qubit assemblage", cmd_chsh);
    in(c, true);
    c->add_option("--observables", o.observables_path, "JSON array of two observables");
  }
  in(add("expose-universal", "LHS initial object whose wiring yields the input", cmd_expose_universal), true);
  {
    auto* c = add("expose-ghz", "GHZ-based exposure", cmd_expose_ghz);
    c->add_flag("--wire", o.wire, "apply the wiring");
    c->add_flag("--witness", o.witness, "evaluate the steering witness on the wired assemblage")->needs("--wire");
  }
  {
    auto* c = add("noisy-w", "noisy W-state assemblage", cmd_noisy_w);
    c->add_option("--v", o.v, "visibility");
    c->add_flag("--from-state", o.from_state, "compute from the state instead of the closed form");
  }
  {
    auto* c = add("gms", "genuine multipartite steering test", cmd_gms);
    in(c, true);
    c->add_flag("--third-only", o.third_only, "allow only the time-ordered term");
    c->add_option("--witness-out", o.witness_out, "write the separating witness here");
  }
  add("verify-canonical", "re-derive the reference values", cmd_verify_canonical);
  {
    auto* c = add("simulate", "Monte-Carlo photocount pipeline", cmd_simulate);
    in(c, false);
    cls(c);
    mode(c);
    c->add_option("--flux", o.flux, "counts scale per setting");
    c->add_option("--seeds", o.seeds, "number of seeds");
    c->add_option("--seed", o.seed, "first seed");
    c->add_option("--threads", o.threads, "worker threads (0: STEERKIT_THREADS or all cores)");
    c->add_option("--bins", o.bins, "histogram bins");
    c->add_option("--witness", o.pipeline_witness, "wired or ns")->check(CLI::IsMember({"wired", "ns"}));
    c->add_flag("--compare-lhs-fit", o.compare_lhs, "also fit the best LHS assemblage");
  }

  std::string command;
  int code = kExitOk;
  std::string error;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    for (auto& [c, fn] : commands)
      if (c->parsed()) {
        command = c->get_name();
        code = fn(run);
      }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error = e.what();
    code = kExitInput;
  } catch (const ParseError& e) {
    error = e.what();
    code = kExitInput;
  } catch (const SolverFailure& e) {
    error = e.what();
    code = kExitSolver;
  } catch (const Error& e) {
    error = e.what();
    code = kExitInput;
  } catch (const nlohmann::json::exception& e) {
    error = e.what();
    code = kExitInput;
  }
  if (!error.empty()) err << "error: " << error << '\n';

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json config = {{"tol", o.tol ? json(*o.tol) : json(nullptr)},
                 {"seed", o.seed},
                 {"flux", o.flux},
                 {"seeds", o.seeds},
                 {"threads", o.threads},
                 {"class", o.cls},
                 {"mode", o.mode},
                 {"solver", settings_json(solver_settings())},
                 {"tolerances",
                  {{"psd", kDefaultTolerances.psd},
                   {"equality", kDefaultTolerances.equality},
                   {"decomposition", kDefaultTolerances.decomposition},
                   {"robustness_zero", kDefaultTolerances.robustness_zero}}}};
  json manifest = {{"command", command},
                   {"argv", args},
                   {"inputs", run.inputs},
                   {"configuration", config},
                   {"outputs", run.outputs},
                   {"exit_code", code},
                   {"wall_time_s", wall}};
  err << json{{"manifest", manifest}}.dump() << '\n';
  return code;
}

}  // namespace steerkit
