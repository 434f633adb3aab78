// Copyright 2026 The advbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end. Every invocation prints one JSON report (or its
// table rendering) on standard output; see report.hpp for the envelope.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "advbound/adversary.hpp"
#include "advbound/conversion.hpp"
#include "advbound/gamma2.hpp"
#include "advbound/labels.hpp"
#include "advbound/purifiers.hpp"
#include "advbound/relations.hpp"
#include "advbound/report.hpp"
#include "advbound/state_oracles.hpp"
#include "advbound/verify.hpp"

namespace {

using namespace advbound;

// Input and state shared by the subcommands.
struct Context {
  double tol = 1e-7;
  std::string out = "json";
  std::string dump_path;
  bool use_stdin = false;
  std::vector<std::string> inputs;
  std::vector<std::string> raw;  // bytes of each input, for the digest
  Report report;
};

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Parses one input. Index 0 may come from standard input.
json load(Context& ctx, size_t index) {
  std::string bytes;
  std::string where;
  const bool from_stdin = index == 0 && (ctx.use_stdin || (!ctx.inputs.empty() && ctx.inputs[0] == "-"));
  if (from_stdin) {
    bytes = read_all(std::cin);
    where = "<stdin>";
  } else {
    const size_t file = index - (ctx.use_stdin ? 1 : 0);
    if (file >= ctx.inputs.size()) throw InputError("missing input file (or pass --stdin)");
    where = ctx.inputs[file];
    std::ifstream f(where, std::ios::binary);
    if (!f) throw InputError("cannot open '" + where + "'");
    bytes = read_all(f);
  }
  ctx.raw.push_back(bytes);
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw InputError(where + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

// Accepts a bare problem, {"problem": ..., "certificate": ...}, or a whole
// report of this tool whose result has that shape.
const json& payload(const json& j) {
  if (j.is_object() && j.contains("result") && j.contains("command")) return j.at("result");
  return j;
}
json unwrap(const json& j) {
  const json& p = payload(j);
  return p.is_object() && p.contains("problem") ? p.at("problem") : p;
}

ExitCode status_exit(bool ok) { return ok ? ExitCode::ok : ExitCode::violated; }

void dump_sdp(const Context& ctx, const BlockSDP& p) {
  if (ctx.dump_path.empty()) return;
  std::ofstream f(ctx.dump_path);
  if (!f) throw InputError("cannot write '" + ctx.dump_path + "'");
  f << p.to_json().dump(2) << "\n";
}

Gamma2Options gamma2_options(const Context& ctx, BlockSDP* dump) {
  Gamma2Options o;
  o.tol = ctx.tol;
  o.dump = ctx.dump_path.empty() ? nullptr : dump;
  return o;
}

void finish_gamma2(Context& ctx, const Gamma2Report& rep, const BlockSDP& dump) {
  dump_sdp(ctx, dump);
  ctx.report.result = rep.to_json();
  ctx.report.status = rep.optimal() ? "optimal" : to_string(rep.primal.status);
  ctx.report.exit = status_exit(rep.optimal());
}

void cmd_gamma2(Context& ctx) {
  const Gamma2Instance inst = Gamma2Instance::from_json(unwrap(load(ctx, 0)));
  BlockSDP dump;
  finish_gamma2(ctx, gamma2_solve(inst, gamma2_options(ctx, &dump)), dump);
}

struct AdvArgs {
  std::string form = "difference";
  std::string bound = "tadv";
  std::string target = "auto";
};

void cmd_adv(Context& ctx, const AdvArgs& a) {
  const json j = unwrap(load(ctx, 0));
  BlockSDP dump;
  const Gamma2Options o = gamma2_options(ctx, &dump);
  if (j.contains("psi")) {
    const StateOracleProblem p = StateOracleProblem::from_json(j);
    TargetKind kind = p.has(TargetKind::states) ? TargetKind::states : TargetKind::unitaries;
    if (a.target == "states") kind = TargetKind::states;
    if (a.target == "unitaries") kind = TargetKind::unitaries;
    if (!p.has(kind)) throw InputError("adv: problem has no " + a.target + " targets");
    if (a.bound != "tadv" && a.bound != "reflection") {
      throw InputError("adv: unknown bound '" + a.bound + "' (expected tadv|reflection)");
    }
    const Gamma2Report rep = a.bound == "tadv" ? tadv(p, kind, o) : reflection_bound(p, kind, o);
    finish_gamma2(ctx, rep, dump);
    ctx.report.result["problem_kind"] = "state-oracle";
    ctx.report.result["bound"] = a.bound;
    ctx.report.result["target"] = kind == TargetKind::states ? "states" : "unitaries";
    return;
  }
  if (j.contains("hamiltonians")) {
    std::vector<std::string> labels = labels_of(j, "hamiltonians");
    std::vector<CMatrix> h, v;
    for (const std::string& l : labels) {
      h.push_back(matrix_from_json(field(j, "hamiltonians", l), "hamiltonians[" + l + "]"));
      v.push_back(matrix_from_json(field(j, "targets", l), "targets[" + l + "]"));
    }
    Gamma2Report rep;
    rep.primal = adv_fractional(labels, h, v, o);
    finish_gamma2(ctx, rep, dump);
    ctx.report.result["problem_kind"] = "fractional";
    return;
  }
  if (j.contains("targets")) {
    Gamma2Report rep;
    rep.primal = adv_unitary(UnitaryProblem::from_json(j), o);
    finish_gamma2(ctx, rep, dump);
    ctx.report.result["problem_kind"] = "unitary";
    return;
  }
  const StateConversionProblem p = StateConversionProblem::from_json(j);
  finish_gamma2(ctx, adv_state_conversion(p, delta_form_from_string(a.form), o), dump);
  ctx.report.result["problem_kind"] = "state-conversion";
  ctx.report.result["form"] = a.form;
}

struct RelationArgs {
  std::string mode = "exact";
  std::optional<double> epsilon;
};

void cmd_relation(Context& ctx, const RelationArgs& a) {
  RelationProblem p = RelationProblem::from_json(unwrap(load(ctx, 0)));
  if (a.epsilon) p.epsilon = *a.epsilon;
  p.validate();
  const RelationMode mode = relation_mode_from_string(a.mode);
  BlockSDP dump;
  RelationOptions ro;
  ro.tol = ctx.tol;
  ro.dump = ctx.dump_path.empty() ? nullptr : &dump;
  const RelationBound b = relation_bound(p, mode, ro);
  ro.dump = nullptr;
  const RelationPrimal pr = relation_primal(p, mode, ro);
  dump_sdp(ctx, dump);
  const double agreement = std::abs(b.value - pr.value);
  const bool agree = agreement <= 1e-4 * (1.0 + std::abs(b.value));
  const bool ok = b.status == SolveStatus::optimal && pr.status == SolveStatus::optimal;
  ctx.report.result = json{{"mode", to_string(mode)},
                           {"value", b.value},
                           {"dual", b.to_json()},
                           {"primal", pr.to_json()},
                           {"agreement", agreement}};
  if (!ok) {
    ctx.report.status = to_string(b.status != SolveStatus::optimal ? b.status : pr.status);
  } else {
    ctx.report.status = agree ? "optimal" : "violated";
  }
  ctx.report.exit = status_exit(ok && agree);
}

void cmd_simulate(Context& ctx, double epsilon) {
  const json pj = unwrap(load(ctx, 0));
  const StateConversionProblem p = pj.contains("psi")
                                       ? conversion_completion(StateOracleProblem::from_json(pj))
                                       : StateConversionProblem::from_json(pj);
  // Certificate: second input, else an SDP solve on the concrete problem.
  Gamma2Certificate cert;
  const size_t have = ctx.inputs.size() + (ctx.use_stdin ? 1 : 0);
  std::string source = "sdp";
  if (have >= 2) {
    const json c = load(ctx, 1);
    const json& cp = payload(c);
    cert = certificate_from_json(cp.contains("certificate") ? cp.at("certificate") : cp);
    source = "input";
  } else {
    Gamma2Options o;
    o.tol = ctx.tol;
    cert = adv_state_conversion(p, DeltaForm::difference, o).primal;
  }
  const ConverterModel m = build_converter(p, cert, epsilon);
  json runs = json::array();
  bool ok = true;
  double worst = 0.0;
  for (int x = 0; x < p.size(); ++x) {
    const ConverterRun r = run_converter(m, x);
    const ClaimReport c = verify_claims(m, x);
    ok = ok && r.error <= epsilon && c.claim_plus && c.claim_minus;
    worst = std::max(worst, r.error);
    runs.push_back(json{{"label", p.labels[x]}, {"run", r.to_json()}, {"claims", c.to_json()}});
  }
  ctx.report.result = json{{"epsilon", epsilon},     {"certificate_source", source},
                           {"w", m.w},               {"delta", m.delta},
                           {"dimension", m.dim()},   {"worst_error", worst},
                           {"runs", runs}};
  ctx.report.status = ok ? "verified" : "violated";
  ctx.report.exit = status_exit(ok);
}

struct ExampleArgs {
  std::string name;
  int k = 2;
  int n = 3;
  int q = 2;
  double alpha = M_PI / 8;
  bool constant = false;
};

void cmd_example(Context& ctx, const ExampleArgs& a) {
  Gamma2Options o;
  o.tol = ctx.tol;
  json r;
  if (a.name == "amplitude-amplification") {
    if (a.k < 1) throw InputError("example: --k must be at least 1");
    const AmplificationInstance aa = make_amplitude_amplification(a.k);
    r = json{{"problem", aa.problem.to_json()},
             {"certificate", aa.certificate.to_json()},
             {"alpha", aa.alpha},
             {"beta", aa.beta},
             {"closed_form", 1.0 / (1.0 - std::cos(aa.alpha))}};
  } else if (a.name == "kothari") {
    const StateOracleProblem p = make_kothari_parity(a.n, a.constant);
    r = json{{"problem", p.to_json()},
             {"certificate", tadv(p, TargetKind::states, o).primal.to_json()}};
  } else if (a.name == "paradox") {
    const StateOracleProblem p = make_paradox_pair(a.alpha);
    r = json{{"problem", p.to_json()},
             {"certificate", reflection_bound(p, TargetKind::states, o).primal.to_json()}};
  } else if (a.name == "standard-oracle") {
    const StandardOracleCertificate s = standard_oracle_certificate(a.q);
    r = json{{"problem", s.instance.to_json()}, {"certificate", s.certificate.to_json()}};
  } else {
    throw InputError("example: unknown example '" + a.name +
                     "' (expected amplitude-amplification|kothari|paradox|standard-oracle)");
  }
  ctx.report.result = r;
  ctx.report.status = "ok";
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  std::string mode = "general";
  std::optional<double> delta;
  int k = 0;
};

void cmd_verify_purifier(Context& ctx, const VerifyArgs& a) {
  const size_t have = ctx.inputs.size() + (ctx.use_stdin ? 1 : 0);
  PurifierInstance inst;
  if (have >= 1) {
    inst = PurifierInstance::from_json(unwrap(load(ctx, 0)));
    if (a.delta) inst.delta = *a.delta;
  } else if (a.mode == "general") {
    inst = trend_instance(a.delta.value_or(0.3));
  } else {
    throw InputError("verify purifier: mode '" + a.mode + "' needs an instance file");
  }
  const PurifierCertificate* c = nullptr;
  GeneralPurifier g;
  PurifierCertificate f;
  json extra = json::object();
  double limit = 0.0;
  if (a.mode == "binary" || a.mode == "multi") {
    f = a.mode == "binary" ? purify_function_binary(inst, a.k) : purify_function_multi(inst, a.k);
    c = &f;
    limit = f.bound;
  } else if (a.mode == "general") {
    g = purify_general(inst, a.k);
    c = &g.purifier;
    limit = 2.0 / inst.delta;
    extra = g.to_json();
  } else {
    throw InputError("verify purifier: unknown mode '" + a.mode + "' (expected binary|multi|general)");
  }
  // Recheck the factors against the instance before reporting the value.
  const double res = c->certificate.primal
                         ? factorization_residual(c->instance, c->certificate.primal->upsilon,
                                                  c->certificate.primal->phi)
                         : 0.0;
  const bool ok = res <= 1e-7 && c->certificate.value <= limit + 1e-9;
  json r = a.mode == "general" ? extra : c->to_json();
  r["mode"] = a.mode;
  r["instance"] = inst.to_json();
  r["recheck_residual"] = res;
  r["limit"] = limit;
  ctx.report.result = r;
  ctx.report.status = ok ? "verified" : "violated";
  ctx.report.exit = status_exit(ok);
}

void cmd_verify(Context& ctx, const VerifyArgs& a) {
  if (a.suite == "purifier") {
    cmd_verify_purifier(ctx, a);
    return;
  }
  VerifyOptions o;
  o.tol = ctx.tol;
  const std::vector<SuiteReport> reps = run_verify(a.suite, a.seed, o);
  json suites = json::array();
  int total = 0, passed = 0;
  bool ok = true;
  for (const SuiteReport& s : reps) {
    suites.push_back(s.to_json());
    total += s.total;
    passed += s.passed;
    ok = ok && s.ok();
  }
  ctx.report.result = json{{"suite", a.suite}, {"seed", a.seed}, {"total", total},
                           {"passed", passed}, {"suites", suites}};
  ctx.report.status = ok ? "verified" : "violated";
  ctx.report.exit = status_exit(ok);
}

std::string digest_of(const std::vector<std::string>& raw) {
  if (raw.empty()) return "";
  if (raw.size() == 1) return "sha256:" + sha256_hex(raw[0]);
  std::string joined;
  for (const std::string& r : raw) joined += sha256_hex(r);
  return "sha256:" + sha256_hex(joined);
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  for (int i = 1; i < argc; ++i) ctx.report.command.push_back(argv[i]);
  if (const char* env = std::getenv("ADVBOUND_TOL")) {
    try {
      ctx.tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "advbound: ignoring malformed ADVBOUND_TOL='" << env << "'\n";
    }
  }

  CLI::App app{"Relative gamma2 and adversary bounds with certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", ctx.tol, "Solver tolerance (overrides ADVBOUND_TOL)");
  app.add_option("--out", ctx.out, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--dump-sdp", ctx.dump_path, "Write the compiled SDP as JSON to this file");
  app.add_flag("--stdin", ctx.use_stdin, "Read the (first) input from standard input");

  auto* g2 = app.add_subcommand("gamma2", "Solve a relative gamma2 instance");
  g2->add_option("input", ctx.inputs, "Instance JSON");

  AdvArgs adv;
  auto* ad = app.add_subcommand("adv", "Adversary bound of a problem");
  ad->add_option("input", ctx.inputs, "Problem JSON");
  ad->add_option("--form", adv.form, "Oracle difference form")->check(CLI::IsMember({"difference", "inner"}));
  ad->add_option("--bound", adv.bound, "State-oracle bound")->check(CLI::IsMember({"tadv", "reflection"}));
  ad->add_option("--target", adv.target, "State-oracle target kind")
      ->check(CLI::IsMember({"auto", "states", "unitaries"}));

  RelationArgs rel;
  auto* rl = app.add_subcommand("relation", "Relation lower bound");
  rl->add_option("input", ctx.inputs, "Relation JSON");
  rl->add_option("--mode", rel.mode, "Error setting")->check(CLI::IsMember({"exact", "approx", "average"}));
  rl->add_option("--epsilon", rel.epsilon, "Override the problem's epsilon");

  double sim_eps = 0.2;
  auto* sm = app.add_subcommand("simulate", "Run the converter built from a certificate");
  sm->add_option("inputs", ctx.inputs, "Problem JSON, then optional certificate JSON");
  sm->add_option("--epsilon", sim_eps, "Target error");

  ExampleArgs ex;
  auto* eg = app.add_subcommand("example", "Emit a built-in problem with its certificate");
  eg->add_option("name", ex.name, "amplitude-amplification|kothari|paradox|standard-oracle")->required();
  eg->add_option("--k", ex.k, "Amplification parameter, alpha = pi/(4k)");
  eg->add_option("--n", ex.n, "Kothari input length");
  eg->add_option("--q", ex.q, "Standard-oracle alphabet size");
  eg->add_option("--alpha", ex.alpha, "Paradox-pair angle");
  eg->add_flag("--constant", ex.constant, "Kothari variant with constant parity");

  VerifyArgs ver;
  auto* vf = app.add_subcommand("verify", "Run property suites, or check a purifier");
  vf->add_option("suite", ver.suite, "Suite name, 'all' or 'purifier'")->required();
  vf->add_option("input", ctx.inputs, "Purifier instance JSON");
  vf->add_option("--seed", ver.seed, "Base seed");
  vf->add_option("--mode", ver.mode, "Purifier mode")->check(CLI::IsMember({"binary", "multi", "general"}));
  vf->add_option("--delta", ver.delta, "Purifier gap or success probability");
  vf->add_option("--K", ver.k, "Series truncation (0 selects automatically)");

  const auto start = std::chrono::steady_clock::now();
  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      std::cout << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      throw InputError(std::string("arguments: ") + e.what());
    }
    if (*g2) cmd_gamma2(ctx);
    if (*ad) cmd_adv(ctx, adv);
    if (*rl) cmd_relation(ctx, rel);
    if (*sm) cmd_simulate(ctx, sim_eps);
    if (*eg) cmd_example(ctx, ex);
    if (*vf) cmd_verify(ctx, ver);
  } catch (const InputError& e) {
    ctx.report.status = "input_error";
    ctx.report.error = e.what();
    ctx.report.exit = ExitCode::input_error;
    ctx.report.result = json::object();
  } catch (const std::exception& e) {
    ctx.report.status = "internal_error";
    ctx.report.error = e.what();
    ctx.report.exit = ExitCode::violated;
    ctx.report.result = json::object();
  }
  ctx.report.input_digest = digest_of(ctx.raw);
  ctx.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json out = ctx.report.to_json();
  if (ctx.out == "table") {
    std::cout << render_table(out);
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return static_cast<int>(ctx.report.exit);
}
