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


#include "advbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "advbound/adversary.hpp"
#include "advbound/conversion.hpp"
#include "advbound/gamma2.hpp"
#include "advbound/purifiers.hpp"
#include "advbound/relations.hpp"
#include "advbound/state_oracles.hpp"

namespace advbound {

void SuiteReport::record(const std::string& check, double slack,
                         const json& instance) {
  const bool pass = slack >= 0.0 && std::isfinite(slack);
  ++total;
  if (pass) ++passed;
  if (total == 1 || slack < worst_slack || !std::isfinite(slack)) worst_slack = slack;
  json& c = checks[check];
  if (c.is_null()) c = json{{"count", 0}, {"passed", 0}, {"worst_slack", slack}};
  c["count"] = c["count"].get<int>() + 1;
  if (pass) c["passed"] = c["passed"].get<int>() + 1;
  if (slack < c["worst_slack"].get<double>()) c["worst_slack"] = slack;
  if (!pass) failures.push_back(json{{"check", check}, {"slack", slack}, {"instance", instance}});
}

json SuiteReport::to_json() const {
  json f = json::array();
  for (const json& x : failures) f.push_back(x);
  return json{{"suite", suite},   {"seed", seed},          {"total", total},
              {"passed", passed}, {"worst_slack", worst_slack},
              {"checks", checks}, {"failures", f},         {"ok", ok()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "gamma2-axioms", "duality", "composition", "spectral-gap",
      "converter",     "oracles", "relations",   "purifiers"};
  return names;
}

std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : suite) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

// Relative slack of an equality check: tol·(1 + scale) − |a − b|.
double equal_slack(double a, double b, double tol) {
  return tol * (1.0 + std::max(std::abs(a), std::abs(b))) - std::abs(a - b);
}

Gamma2Instance random_instance(Rng& rng, int max_labels, int zd, int max_dx) {
  const int n1 = random_int(rng, 1, max_labels), n2 = random_int(rng, 1, max_labels);
  const int d1 = random_int(rng, 1, max_dx), d2 = random_int(rng, 1, max_dx);
  std::vector<std::vector<CMatrix>> a(n1, std::vector<CMatrix>(n2)), d = a;
  for (int x = 0; x < n1; ++x) {
    for (int y = 0; y < n2; ++y) {
      a[x][y] = random_matrix(zd, zd, rng);
      d[x][y] = random_matrix(d1, d2, rng);
    }
  }
  return make_instance(a, d);
}

Gamma2Instance with_a(const Gamma2Instance& base,
                      const std::function<CMatrix(int, int)>& a) {
  Gamma2Instance out = base;
  for (int x = 0; x < base.n1(); ++x) {
    for (int y = 0; y < base.n2(); ++y) out.a[x][y] = a(x, y);
  }
  return out;
}

std::vector<int> random_subset(Rng& rng, int n) {
  std::vector<int> s;
  for (int i = 0; i < n; ++i) {
    if (random_int(rng, 0, 1)) s.push_back(i);
  }
  if (s.empty()) s.push_back(random_int(rng, 0, n - 1));
  return s;
}

void suite_axioms(SuiteReport& r, Rng& rng, const VerifyOptions& o) {
  constexpr double kTol = 1e-5;
  constexpr int kCases = 10;
  for (int c = 0; c < kCases; ++c) {
    const Gamma2Instance inst = random_instance(rng, 3, 1, 2);
    const json js = inst.to_json();
    const double v = gamma2_value(inst, o.tol);

    const cd s = random_complex(rng);
    const double vs = gamma2_value(with_a(inst, [&](int x, int y) { return CMatrix(s * inst.a[x][y]); }), o.tol);
    r.record("homogeneity", equal_slack(vs, std::abs(s) * v, kTol), js);

    const Gamma2Instance other = with_a(inst, [&](int, int) { return random_matrix(1, 1, rng); });
    const double vb = gamma2_value(other, o.tol);
    const double vsum = gamma2_value(
        with_a(inst, [&](int x, int y) { return CMatrix(inst.a[x][y] + other.a[x][y]); }), o.tol);
    r.record("triangle", v + vb + kTol * (1 + v + vb) - vsum, js);

    const double v0 = gamma2_value(with_a(inst, [](int, int) { return CMatrix::Zero(1, 1); }), o.tol);
    r.record("zero_family", 1e-7 - std::abs(v0), js);
    r.record("nonzero_family", v - 1e-7, js);

    r.record("entrywise_lower", v + kTol * (1 + v) - entrywise_lower_bound(inst), js);
    r.record("crude_upper", crude_bound(inst) + kTol * (1 + v) - v, js);

    const Gamma2Instance sub = strike(inst, random_subset(rng, inst.n1()), random_subset(rng, inst.n2()));
    r.record("strike", v + 1e-6 * (1 + v) - gamma2_value(sub, o.tol), js);

    const double vd = gamma2_value(duplicate(inst, random_int(rng, 1, 2), random_int(rng, 1, 2)), o.tol);
    r.record("duplicate", equal_slack(vd, v, kTol), js);

    const double cs = random_uniform(rng, 0.5, 2.0);
    Gamma2Instance scaled = inst;
    for (auto& row : scaled.delta) {
      for (CMatrix& m : row) m *= cs;
    }
    r.record("delta_scaling", equal_slack(gamma2_value(scaled, o.tol), v / cs, kTol), js);
  }

  // Linear maps on matrix-valued A: value(U_x* A V_y | Δ) ≤ max‖U‖ max‖V‖ value.
  for (int c = 0; c < kCases; ++c) {
    const Gamma2Instance inst = random_instance(rng, 2, 2, 2);
    const double v = gamma2_value(inst, o.tol);
    std::vector<CMatrix> u, w;
    double nu = 0.0, nw = 0.0;
    for (int x = 0; x < inst.n1(); ++x) {
      u.push_back(random_matrix(2, 2, rng));
      nu = std::max(nu, spectral_norm(u.back()));
    }
    for (int y = 0; y < inst.n2(); ++y) {
      w.push_back(random_matrix(2, 2, rng));
      nw = std::max(nw, spectral_norm(w.back()));
    }
    const double vt = gamma2_value(
        with_a(inst, [&](int x, int y) { return CMatrix(u[x].adjoint() * inst.a[x][y] * w[y]); }), o.tol);
    const double bound = nu * nw * v;
    r.record("linear_maps", bound + kTol * (1 + bound) - vt, inst.to_json());
  }

  // Reflexivity on matrix-valued families, tighter solve.
  for (int c = 0; c < kCases; ++c) {
    const Gamma2Instance base = random_instance(rng, 3, 1, 2);
    Gamma2Instance inst = base;
    inst.a = inst.delta;
    r.record("reflexivity", 1e-7 - std::abs(gamma2_value(inst, 1e-9) - 1.0), inst.to_json());
  }

  // Scalar reduction a/δ.
  for (int c = 0; c < kCases; ++c) {
    const Gamma2Instance inst = random_instance(rng, 3, 1, 1);
    const double v = gamma2_value(inst, o.tol);
    const double vr = gamma2_value(plain_instance(reduce_scalar(inst)), o.tol);
    r.record("scalar_reduction", equal_slack(v, vr, kTol), inst.to_json());
  }

  CMatrix tri(2, 2);
  tri << 1.0, 0.0, 1.0, 1.0;
  r.record("strict_lower_triangle", gamma2_value(plain_instance(tri), o.tol) - 1.0 - 1e-3,
           plain_instance(tri).to_json());

  // Continuity: deviation shrinks with the perturbation size.
  {
    Gamma2Instance inst = random_instance(rng, 3, 1, 2);
    for (auto& row : inst.delta) {
      for (CMatrix& m : row) {
        const double nm = spectral_norm(m);
        if (nm < 0.5) m *= 0.5 / std::max(nm, 1e-12);
      }
    }
    const double v = gamma2_value(inst, 1e-9);
    std::vector<std::vector<CMatrix>> dir = inst.delta;
    for (auto& row : dir) {
      for (CMatrix& m : row) {
        m = random_matrix(static_cast<int>(m.rows()), static_cast<int>(m.cols()), rng);
        m /= spectral_norm(m);
      }
    }
    std::vector<double> dev;
    for (double eta : {1e-2, 1e-3, 1e-4}) {
      Gamma2Instance p = inst;
      for (int x = 0; x < p.n1(); ++x) {
        for (int y = 0; y < p.n2(); ++y) p.delta[x][y] += eta * dir[x][y];
      }
      dev.push_back(std::abs(gamma2_value(p, 1e-9) - v));
    }
    for (size_t i = 1; i < dev.size(); ++i) {
      r.record("continuity", dev[i - 1] - dev[i] + 1e-7, inst.to_json());
    }
  }
}

void suite_duality(SuiteReport& r, Rng& rng, const VerifyOptions& o) {
  Gamma2Options go;
  go.tol = o.tol;
  for (int c = 0; c < 30; ++c) {
    const Gamma2Instance inst = random_instance(rng, 5, 1, 4);
    const json js = inst.to_json();
    const Gamma2Report rep = gamma2_solve(inst, go);
    const double v = rep.value();
    r.record("strong_duality", 1e-5 * (1 + v) - rep.duality_gap(), js);
    const Gamma2Dual& d = *rep.dual->dual;
    const DualCheck chk = check_dual(inst, d.mu, d.lambda);
    r.record("dual_mu_sum", 1e-8 - std::abs(chk.mu_sum - 1.0), js);
    r.record("dual_psd", chk.min_eig + 1e-8, js);
    r.record("gamma_delta_norm", 1.0 + 1e-5 - d.gamma_delta_norm, js);
    r.record("gamma_a_norm", d.gamma_a_norm - v + 1e-5 * (1 + v), js);
    r.record("primal_residual", 10.0 * std::max(o.tol, 1e-7) * (1 + v) - rep.primal.residual, js);
  }
}

void suite_composition(SuiteReport& r, Rng& rng, const VerifyOptions& o) {
  constexpr double kTol = 1e-5;
  auto slack_of = [&](const CombineReport& c) {
    return c.bound + kTol * (1 + c.bound) - c.value_combined;
  };
  for (int c = 0; c < 8; ++c) {
    // compose: (A|B) then (B|Δ), B scalar.
    const int n1 = random_int(rng, 1, 3), n2 = random_int(rng, 1, 3), dx = random_int(rng, 1, 2);
    std::vector<std::vector<CMatrix>> a(n1, std::vector<CMatrix>(n2)), b = a, d = a;
    for (int x = 0; x < n1; ++x) {
      for (int y = 0; y < n2; ++y) {
        a[x][y] = random_matrix(1, 1, rng);
        b[x][y] = random_matrix(1, 1, rng);
        d[x][y] = random_matrix(dx, dx, rng);
      }
    }
    const Gamma2Instance ab = make_instance(a, b), bd = make_instance(b, d);
    const json js = json{{"first", ab.to_json()}, {"second", bd.to_json()}};
    r.record("compose", slack_of(combine_check(ab, bd, CombineMode::compose, o.tol)), js);

    const Gamma2Instance ad = make_instance(a, d);
    const Gamma2Instance other = with_a(ad, [&](int, int) { return random_matrix(1, 1, rng); });
    const CombineReport ds = combine_check(ad, other, CombineMode::direct_sum, o.tol);
    const json jd = json{{"first", ad.to_json()}, {"second", other.to_json()}};
    r.record("direct_sum_shared", equal_slack(ds.value_combined, ds.bound, kTol), jd);
    r.record("direct_sum_general",
             slack_of(combine_check(ad, make_instance(b, b), CombineMode::direct_sum, o.tol)),
             json{{"first", ad.to_json()}, {"second", make_instance(b, b).to_json()}});
    r.record("tensor", slack_of(combine_check(ad, make_instance(b, b), CombineMode::tensor, o.tol)),
             json{{"first", ad.to_json()}, {"second", make_instance(b, b).to_json()}});

    CMatrix m(n1, n2);
    for (int x = 0; x < n1; ++x) {
      for (int y = 0; y < n2; ++y) m(x, y) = random_complex(rng);
    }
    const Gamma2Instance plain = plain_instance(m);
    r.record("hadamard_scale", slack_of(combine_check(plain, ad, CombineMode::hadamard_scale, o.tol)),
             json{{"first", plain.to_json()}, {"second", ad.to_json()}});
  }
}

void suite_spectral_gap(SuiteReport& r, Rng& rng, const VerifyOptions&) {
  for (int c = 0; c < 200; ++c) {
    const int n = random_int(rng, 2, 6);
    const CMatrix p1 = random_projector(n, random_int(rng, 0, n - 1), rng);
    const CMatrix p2 = random_projector(n, random_int(rng, 0, n), rng);
    const double delta = random_uniform(rng, 0.01, 1.0);
    CVector w = (identity(n) - p1) * random_state(n, rng);
    if (w.norm() > 0) w /= w.norm();
    const double res = effective_gap_check(p1, p2, w, delta);
    r.record("effective_spectral_gap", 1e-9 - res,
             json{{"pi1", matrix_to_json(p1)}, {"pi2", matrix_to_json(p2)},
                  {"w", vector_to_json(w)}, {"delta", delta}});
  }
}

void converter_checks(SuiteReport& r, const std::string& name,
                      const StateConversionProblem& p, const Gamma2Certificate& cert,
                      double eps) {
  const ConverterModel m = build_converter(p, cert, eps);
  for (int x = 0; x < p.size(); ++x) {
    const json js = json{{"problem", p.to_json()}, {"epsilon", eps}, {"label", p.labels[x]}};
    r.record(name + "_error", eps - run_converter(m, x).error, js);
    const ClaimReport c = verify_claims(m, x);
    r.record(name + "_claim_plus", c.claim_plus ? 0.0 : -1.0, js);
    r.record(name + "_claim_minus", c.claim_minus ? 0.0 : -1.0, js);
  }
}

void suite_converter(SuiteReport& r, Rng& rng, const VerifyOptions& o) {
  constexpr double kEps = 0.2;
  Gamma2Options go;
  go.tol = o.tol;
  {
    StateConversionProblem p;
    p.labels = {"0", "1"};
    p.oracles = {CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, -1.0)};
    p.rho = {basis_vector(2, 0), basis_vector(2, 0)};
    p.sigma = p.rho;
    converter_checks(r, "trivial", p, adv_state_conversion(p, DeltaForm::difference, go).primal, kEps);
    const double h = 1.0 / std::sqrt(2.0);
    CVector plus(2), minus(2);
    plus << h, h;
    minus << h, -h;
    p.sigma = {plus, minus};
    converter_checks(r, "plus_minus", p, adv_state_conversion(p, DeltaForm::difference, go).primal, kEps);
  }
  {
    const StateConversionProblem p = conversion_completion(make_amplitude_amplification(2).problem);
    converter_checks(r, "amplification", p, adv_state_conversion(p, DeltaForm::difference, go).primal, kEps);
  }
  for (int c = 0; c < 3; ++c) {
    StateConversionProblem p;
    const int n = random_int(rng, 2, 3), dx = random_int(rng, 1, 2), dz = random_int(rng, 1, 3);
    for (int x = 0; x < n; ++x) {
      p.labels.push_back(std::to_string(x));
      p.oracles.push_back(random_unitary(dx, rng));
      p.rho.push_back(random_state(dz, rng));
      p.sigma.push_back(random_state(dz, rng));
    }
    converter_checks(r, "random", p, adv_state_conversion(p, DeltaForm::difference, go).primal, kEps);
  }
}

void suite_oracles(SuiteReport& r, Rng& rng, const VerifyOptions& o) {
  Gamma2Options go;
  go.tol = o.tol;
  for (int q = 2; q <= 4; ++q) {
    const StandardOracleCertificate s = standard_oracle_certificate(q);
    const json js = json{{"q", q}};
    r.record("standard_oracle_residual", 1e-9 - s.certificate.residual, js);
    r.record("standard_oracle_value", 2.0 + 1e-12 - s.certificate.factor_objective, js);
    // Independent check of the blocks against the instance.
    r.record("standard_oracle_recheck",
             1e-9 - factorization_residual(s.instance, s.certificate.primal->upsilon,
                                           s.certificate.primal->phi),
             js);
  }

  for (int c = 0; c < 10; ++c) {
    const int n = random_int(rng, 2, 5);
    const CVector a = random_state(n, rng), b = random_state(n, rng);
    const double ov = std::min(1.0, std::abs(a.dot(b)));
    const double s = 2.0 * std::sqrt(1.0 - ov * ov);
    const Spectrum sp = eig_hermitian(identity(n) - 2.0 * a * a.adjoint() -
                                      (identity(n) - 2.0 * b * b.adjoint()));
    double worst = std::abs(sp.eigenvalues.front().real() + s) +
                   std::abs(sp.eigenvalues.back().real() - s);
    for (size_t k = 1; k + 1 < sp.eigenvalues.size(); ++k) {
      worst = std::max(worst, std::abs(sp.eigenvalues[k].real()));
    }
    r.record("reflection_spectrum", 1e-9 - worst,
             json{{"psi", vector_to_json(a)}, {"phi", vector_to_json(b)}});
  }

  {
    const AmplificationInstance aa = make_amplitude_amplification(2);
    const double target = 1.0 / (1.0 - std::cos(aa.alpha));
    const json js = aa.problem.to_json();
    r.record("amplification_value", 1e-3 - std::abs(tadv(aa.problem, TargetKind::states, go).value() - target), js);
    r.record("amplification_certificate",
             1e-9 - factorization_residual(tadv_instance(aa.problem, TargetKind::states),
                                           aa.certificate.primal->upsilon,
                                           aa.certificate.primal->phi),
             js);
  }

  // Non-constant Boolean functions of two bits: ½ t̃Adv ≤ Adv ≤ t̃Adv.
  for (int f = 1; f < 15; f += 3) {
    const std::vector<int> values = {f & 1, (f >> 1) & 1, (f >> 2) & 1, (f >> 3) & 1};
    const double t = tadv(standard_function_problem(2, 2, 2, values), TargetKind::states, go).value();
    const double a = adv_state_conversion(standard_conversion_problem(2, 2, 2, values),
                                          DeltaForm::difference, go).value();
    const json js = json{{"values", values}};
    r.record("sandwich_lower", a - 0.5 * t + 1e-5, js);
    r.record("sandwich_upper", t - a + 1e-5, js);
  }
}

RelationProblem random_relation(Rng& rng) {
  const int n = random_int(rng, 2, 4), m = random_int(rng, 2, 3), d = random_int(rng, 1, 3);
  std::vector<std::string> labels;
  std::vector<CMatrix> oracles;
  std::vector<std::vector<int>> rel;
  for (int x = 0; x < n; ++x) {
    labels.push_back(std::to_string(x));
    oracles.push_back(random_unitary(d, rng));
    std::vector<int> allowed;
    for (int a = 0; a < m; ++a) {
      if (random_int(rng, 0, 1)) allowed.push_back(a);
    }
    if (allowed.empty()) allowed.push_back(random_int(rng, 0, m - 1));
    rel.push_back(allowed);
  }
  return relation_from_oracles(labels, oracles, m, rel);
}

void suite_relations(SuiteReport& r, Rng& rng, const VerifyOptions& o) {
  RelationOptions ro;
  ro.tol = std::max(o.tol, 1e-7);
  for (int c = 0; c < 8; ++c) {
    RelationProblem p = random_relation(rng);
    const json js = p.to_json();
    const double exact = relation_bound(p, RelationMode::exact, ro).value;
    r.record("exact_agreement",
             equal_slack(exact, relation_primal(p, RelationMode::exact, ro).value, 1e-4), js);
    double prev = exact;
    for (double eps : {0.05, 0.2}) {
      p.epsilon = eps;
      const double v = relation_bound(p, RelationMode::approx, ro).value;
      r.record("approx_agreement",
               equal_slack(v, relation_primal(p, RelationMode::approx, ro).value, 1e-4), js);
      r.record("epsilon_monotone", prev - v + 1e-5 * (1 + prev), js);
      prev = v;
    }
    p.epsilon = 0.05;
    p.prior.assign(p.size(), 1.0 / p.size());
    const double avg = relation_bound(p, RelationMode::average, ro).value;
    r.record("average_agreement",
             equal_slack(avg, relation_primal(p, RelationMode::average, ro).value, 1e-4), js);
    p.prior.clear();
    r.record("average_below_worst_case",
             relation_bound(p, RelationMode::approx, ro).value - avg + 1e-5 * (1 + avg), js);
  }
}

PurifierInstance random_binary(Rng& rng) {
  PurifierInstance p;
  p.c = 0.5;
  p.delta = 0.25;
  const int n = random_int(rng, 2, 4);
  for (int x = 0; x < n; ++x) {
    p.labels.push_back(std::to_string(x));
    const double w1 = (x % 2) ? random_uniform(rng, 0.75, 1.0) : random_uniform(rng, 0.0, 0.25);
    CVector v(4);
    v << std::sqrt(1 - w1) * random_state(2, rng), std::sqrt(w1) * random_state(2, rng);
    p.psi.push_back(v);
  }
  return p;
}

PurifierInstance random_multi(Rng& rng) {
  PurifierInstance p;
  p.outputs = 3;
  p.delta = 0.2;
  for (int x = 0; x < 3; ++x) {
    p.labels.push_back(std::to_string(x));
    const int cls = random_int(rng, 0, 2);
    const double w = random_uniform(rng, 0.5 + p.delta, 1.0);
    CVector rest = random_state(6, rng);
    rest.segment(2 * cls, 2).setZero();
    rest /= rest.norm();
    CVector v = std::sqrt(1 - w) * rest;
    v.segment(2 * cls, 2) += std::sqrt(w) * random_state(2, rng);
    p.psi.push_back(v);
  }
  return p;
}

PurifierInstance random_general(Rng& rng, double delta) {
  PurifierInstance p;
  p.delta = delta;
  for (int x = 0; x < 4; ++x) {
    p.labels.push_back(std::to_string(x));
    const CMatrix pr = random_projector(3, random_int(rng, 1, 2), rng);
    CVector v;
    do {
      v = random_state(3, rng);
    } while ((pr * v).squaredNorm() < delta);
    p.psi.push_back(v);
    p.projectors.push_back(pr);
  }
  return p;
}

void function_purifier_checks(SuiteReport& r, const std::string& name,
                              const PurifierInstance& p, const PurifierCertificate& c) {
  const json js = p.to_json();
  const double res = c.certificate.primal
                         ? factorization_residual(c.instance, c.certificate.primal->upsilon,
                                                  c.certificate.primal->phi)
                         : 0.0;
  r.record(name + "_residual", 1e-7 - res - c.certificate.tail, js);
  r.record(name + "_value", c.bound + 1e-9 - c.certificate.value, js);
  r.record(name + "_sdp_below_certificate",
           c.certificate.value + 1e-5 - gamma2_value(c.instance), js);
}

void suite_purifiers(SuiteReport& r, Rng& rng, const VerifyOptions&) {
  for (int c = 0; c < 6; ++c) {
    const PurifierInstance p = random_binary(rng);
    function_purifier_checks(r, "binary", p, purify_function_binary(p));
  }
  for (int c = 0; c < 4; ++c) {
    const PurifierInstance p = random_multi(rng);
    function_purifier_checks(r, "multi", p, purify_function_multi(p));
  }
  for (int c = 0; c < 6; ++c) {
    const PurifierInstance p = random_general(rng, 0.3);
    const json js = p.to_json();
    const GeneralPurifier g = purify_general(p);
    const Gamma2Certificate& cert = g.purifier.certificate;
    r.record("general_residual",
             1e-7 - factorization_residual(g.purifier.instance, cert.primal->upsilon, cert.primal->phi),
             js);
    r.record("general_value", 2.0 / p.delta + 1e-6 - cert.value - cert.tail, js);
    r.record("general_sdp_below_certificate",
             cert.value + 1e-5 - gamma2_value(g.purifier.instance), js);
    r.record("general_unit", 1e-6 - g.sigma_unit_error, js);
    r.record("general_support", 1e-6 - g.sigma_support_error, js);
    // Series Σ_k ⟨Π_xψ_x,Π_yψ_y⟩⟨Π_x^⊥ψ_x,Π_y^⊥ψ_y⟩^k with 1000 terms.
    double worst = 0.0;
    for (int x = 0; x < p.size(); ++x) {
      for (int y = 0; y < p.size(); ++y) {
        const CVector gx = p.projectors[x] * p.psi[x], gy = p.projectors[y] * p.psi[y];
        const cd q = (p.psi[x] - gx).dot(p.psi[y] - gy);
        cd term = gx.dot(gy), sum = 0.0;
        for (int k = 0; k < 1000; ++k) {
          sum += term;
          term *= q;
        }
        worst = std::max(worst, std::abs(sum - g.sigma_gram(x, y)));
        worst = std::max(worst, std::abs(g.sigma[x].dot(g.sigma[y]) - g.sigma_gram(x, y)));
      }
    }
    r.record("general_gram_series", 1e-9 - worst, js);
  }
  const TrendReport t = purifier_trend_check({1.0, 0.4, 0.2, 0.1});
  r.record("trend_growth", t.within_bound ? 0.0 : -1.0, t.to_json());
  r.record("trend_unit_delta", 2.0 + 1e-6 - t.points.front().value, t.to_json());
}

}  // namespace

SuiteReport run_suite(const std::string& suite, std::uint64_t seed,
                      const VerifyOptions& opt) {
  using Fn = void (*)(SuiteReport&, Rng&, const VerifyOptions&);
  static const std::map<std::string, Fn> table = {
      {"gamma2-axioms", suite_axioms},   {"duality", suite_duality},
      {"composition", suite_composition}, {"spectral-gap", suite_spectral_gap},
      {"converter", suite_converter},    {"oracles", suite_oracles},
      {"relations", suite_relations},    {"purifiers", suite_purifiers}};
  const auto it = table.find(suite);
  if (it == table.end()) throw InputError("verify: unknown suite '" + suite + "'");
  SuiteReport r;
  r.suite = suite;
  r.seed = suite_seed(seed, suite);
  Rng rng(r.seed);
  it->second(r, rng, opt);
  return r;
}

std::vector<SuiteReport> run_verify(const std::string& suite, std::uint64_t seed,
                                    const VerifyOptions& opt) {
  std::vector<SuiteReport> out;
  if (suite == "all") {
    for (const std::string& s : suite_names()) out.push_back(run_suite(s, seed, opt));
  } else {
    out.push_back(run_suite(suite, seed, opt));
  }
  return out;
}

}  // namespace advbound
