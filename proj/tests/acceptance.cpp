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


// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Tolerances are pinned here and must not be loosened to make a line pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "advbound/adversary.hpp"
#include "advbound/conversion.hpp"
#include "advbound/gamma2.hpp"
#include "advbound/purifiers.hpp"
#include "advbound/relations.hpp"
#include "advbound/state_oracles.hpp"
#include "advbound/verify.hpp"

namespace advbound {
namespace {

// Accumulates sub-checks; the first failing one is reported.
class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    ++count_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
  }
  bool ok() const { return first_failure_.empty(); }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  std::string detail() const {
    std::ostringstream o;
    o << count_ << " checks";
    if (!ok()) o << ", first failure: " << first_failure_;
    if (!notes_.empty()) o << " [" << notes_ << "]";
    return o.str();
  }

 private:
  int count_ = 0;
  std::string first_failure_;
  std::string notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Gamma2Instance random_scalar_instance(Rng& rng) {
  const int n1 = random_int(rng, 1, 5), n2 = random_int(rng, 1, 5);
  const int d1 = random_int(rng, 1, 4), d2 = random_int(rng, 1, 4);
  std::vector<std::vector<CMatrix>> a(n1, std::vector<CMatrix>(n2)), d = a;
  for (int x = 0; x < n1; ++x) {
    for (int y = 0; y < n2; ++y) {
      a[x][y] = random_matrix(1, 1, rng);
      d[x][y] = random_matrix(d1, d2, rng);
    }
  }
  return make_instance(a, d);
}

void check_strong_duality(Criterion& c) {
  Rng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Gamma2Report r = gamma2_solve(random_scalar_instance(rng));
    const double v = r.value();
    worst = std::max(worst, r.duality_gap() / (1 + v));
    c.check(r.dual.has_value() && r.duality_gap() <= 1e-5 * (1 + v), "instance " + std::to_string(t));
  }
  c.note("worst relative gap " + fmt(worst));
}

// The property suites draw 10 (axioms) and 8 (composition) cases per seed.
void check_gamma2_properties(Criterion& c) {
  auto run = [&](const std::string& suite, int seeds) {
    int total = 0;
    for (int s = 1; s <= seeds; ++s) {
      const SuiteReport r = run_suite(suite, s);
      total += r.total;
      c.check(r.ok(), suite + " seed " + std::to_string(s) + " worst slack " + fmt(r.worst_slack));
    }
    c.note(suite + " " + std::to_string(total) + " checks");
  };
  run("gamma2-axioms", 3);
  run("composition", 4);

  Rng rng(1002);
  for (int t = 0; t < 30; ++t) {
    Gamma2Instance inst = random_scalar_instance(rng);
    inst.a = inst.delta;
    c.check(std::abs(gamma2_value(inst, 1e-9) - 1.0) <= 1e-7, "reflexivity " + std::to_string(t));
  }
  CMatrix tri(2, 2);
  tri << 1.0, 0.0, 1.0, 1.0;
  const double vt = gamma2_value(plain_instance(tri));
  c.check(vt > 1.0 + 1e-3, "lower triangle " + fmt(vt));
  c.note("lower triangle " + fmt(vt));
}

void check_amplitude_amplification(Criterion& c) {
  const AmplificationInstance aa = make_amplitude_amplification(2);
  const double target = 1.0 / (1.0 - std::cos(M_PI / 8));
  const Gamma2Instance inst = tadv_instance(aa.problem, TargetKind::states);
  const double v = tadv(aa.problem, TargetKind::states).value();
  c.check(std::abs(v - target) <= 1e-3, "SDP value " + fmt(v));
  c.check(std::abs(aa.certificate.factor_objective - target) <= 1e-3, "upper construction");
  c.check(factorization_residual(inst, aa.certificate.primal->upsilon, aa.certificate.primal->phi) <= 1e-9,
          "upper construction residual");
  c.check(std::abs(entrywise_lower_bound(inst) - target) <= 1e-3, "lower construction");
  c.note("tAdv " + fmt(v));

  std::vector<double> al, tv, rv;
  for (int k : {2, 4, 8}) {
    const AmplificationInstance a = make_amplitude_amplification(k);
    al.push_back(a.alpha);
    tv.push_back(tadv(a.problem, TargetKind::states).value());
    const double r = reflection_bound(a.problem, TargetKind::states).value();
    rv.push_back(r);
    c.check(r >= 1.0 / (2.0 * std::sin(a.beta)) - 1e-6 && r <= 8.0 / a.alpha,
            "reflection bound range k=" + std::to_string(k));
  }
  for (int i = 1; i < 3; ++i) {
    const double t = tv[i] / tv[i - 1] / std::pow(al[i - 1] / al[i], 2);
    const double r = rv[i] / rv[i - 1] / (al[i - 1] / al[i]);
    c.check(std::abs(t - 1.0) <= 0.15, "alpha^-2 scaling " + fmt(t));
    c.check(std::abs(r - 1.0) <= 0.25, "alpha^-1 scaling " + fmt(r));
    c.note("ratios " + fmt(t) + "/" + fmt(r));
  }
}

void check_paradox_pair(Criterion& c) {
  std::vector<double> sv, uv;
  for (double a : {M_PI / 8, M_PI / 16, M_PI / 32}) {
    const StateOracleProblem p = make_paradox_pair(a);
    sv.push_back(reflection_bound(p, TargetKind::states).value());
    uv.push_back(reflection_bound(p, TargetKind::unitaries).value());
  }
  const double lo = *std::min_element(sv.begin(), sv.end());
  const double hi = *std::max_element(sv.begin(), sv.end());
  c.check(hi <= 2.0 * lo, "state form spread " + fmt(hi / lo));
  for (int i = 1; i < 3; ++i) c.check(uv[i] / uv[i - 1] >= 1.3, "unitary growth " + fmt(uv[i] / uv[i - 1]));
  c.note("state " + fmt(sv[0]) + "," + fmt(sv[1]) + "," + fmt(sv[2]) + " unitary " + fmt(uv[0]) +
         "," + fmt(uv[1]) + "," + fmt(uv[2]));
}

void check_converter(Criterion& c) {
  constexpr double kEps = 0.2;
  StateConversionProblem pm;
  pm.labels = {"0", "1"};
  pm.oracles = {CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, -1.0)};
  const double h = 1.0 / std::sqrt(2.0);
  const CVector e0 = basis_vector(2, 0), e1 = basis_vector(2, 1);
  pm.rho = {e0, e0};
  pm.sigma = {h * (e0 + e1), h * (e0 - e1)};
  StateConversionProblem trivial = pm;
  trivial.sigma = trivial.rho;
  const std::vector<std::pair<std::string, StateConversionProblem>> corpus = {
      {"trivial", trivial},
      {"plus_minus", pm},
      {"amplification", conversion_completion(make_amplitude_amplification(2).problem)}};
  double worst = 0.0;
  for (const auto& [name, p] : corpus) {
    const ConverterModel m = build_converter(p, gamma2_primal(state_conversion_instance(p)), kEps);
    for (int x = 0; x < p.size(); ++x) {
      const double err = run_converter(m, x).error;
      worst = std::max(worst, err);
      c.check(err <= kEps, name + " error " + fmt(err));
      const ClaimReport cl = verify_claims(m, x, 1e-7);
      c.check(cl.claim_plus, name + " fixed-point claim");
      c.check(cl.claim_minus, name + " gap claim");
    }
  }
  c.note("worst error " + fmt(worst));
}

void check_spectral_gap(Criterion& c) {
  const SuiteReport r = run_suite("spectral-gap", 1);
  c.check(r.total == 200 && r.ok(), std::to_string(r.passed) + "/" + std::to_string(r.total));
  c.note("worst slack " + fmt(r.worst_slack));
}

void check_extraction(Criterion& c) {
  StateConversionProblem pm;
  pm.labels = {"0", "1"};
  pm.oracles = {CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, -1.0)};
  const double h = 1.0 / std::sqrt(2.0);
  const CVector e0 = basis_vector(2, 0), e1 = basis_vector(2, 1);
  pm.rho = {e0, e0};
  pm.sigma = {h * (e0 + e1), h * (e0 - e1)};
  const Gamma2Certificate d = feasible_from_algorithm(distinguisher_algorithm(), pm);
  c.check(d.residual <= 1e-8, "distinguisher residual " + fmt(d.residual));
  c.check(d.factor_objective <= 1.0 + 1e-12, "distinguisher objective " + fmt(d.factor_objective));
  c.check(adv_state_conversion(pm).value() <= d.factor_objective + 1e-6, "distinguisher SDP");

  // Two-query reflection circuit on state-generating oracles.
  Rng rng(1007);
  const int dx = 3;
  StateConversionProblem q;
  UnitaryProblem u;
  for (int x = 0; x < 3; ++x) {
    CVector psi = random_state(dx, rng);
    psi(0) = 0.0;
    psi.normalize();
    const CMatrix o = state_reflection(psi);
    const CVector dv = basis_vector(dx, 0) - psi;
    const CMatrix r = identity(dx) - dv * dv.adjoint();
    q.labels.push_back(std::to_string(x));
    q.oracles.push_back(o);
    const CVector rho = random_state(dx, rng);
    q.rho.push_back(rho);
    q.sigma.push_back(r * rho);
    u.labels.push_back(std::to_string(x));
    u.oracles.push_back(o);
    u.targets.push_back(r);
  }
  const QueryAlgorithm alg = reflection_algorithm(dx);
  const Gamma2Certificate cs = feasible_from_algorithm(alg, q);
  c.check(cs.residual <= 1e-8, "reflection residual " + fmt(cs.residual));
  c.check(cs.factor_objective <= 2.0 + 1e-12, "reflection objective " + fmt(cs.factor_objective));
  c.check(adv_state_conversion(q).value() <= cs.factor_objective + 1e-6, "reflection SDP");
  const Gamma2Certificate cu = unitary_feasible_from_algorithm(alg, u);
  c.check(cu.residual <= 1e-8, "unitary reflection residual " + fmt(cu.residual));
  c.check(cu.factor_objective <= 2.0 + 1e-12, "unitary reflection objective");
  c.check(adv_unitary(u).value <= cu.factor_objective + 1e-6, "unitary reflection SDP");
  c.note("objectives " + fmt(d.factor_objective) + ", " + fmt(cs.factor_objective));
}

void check_standard_oracle(Criterion& c) {
  for (int q = 2; q <= 4; ++q) {
    const StandardOracleCertificate s = standard_oracle_certificate(q);
    const double res = factorization_residual(s.instance, s.certificate.primal->upsilon,
                                              s.certificate.primal->phi);
    c.check(res <= 1e-9, "q=" + std::to_string(q) + " residual " + fmt(res));
    c.check(s.certificate.factor_objective <= 2.0 + 1e-12, "q=" + std::to_string(q) + " value");
  }
  const std::vector<int> values = {0, 1, 1, 1};
  const double t = tadv(standard_function_problem(2, 2, 2, values), TargetKind::states).value();
  const double a = adv_state_conversion(standard_conversion_problem(2, 2, 2, values)).value();
  c.check(a >= 0.5 * t - 1e-5 && a <= t + 1e-5, "sandwich tAdv " + fmt(t) + " Adv " + fmt(a));
  c.note("OR2 tAdv " + fmt(t) + " Adv " + fmt(a));
}

// max λ_max(Γ) over Γ supported on the 00 row/column with ‖Γ∘Δ_j‖ ≤ 1,
// searched on a grid and evaluated with dense eigensolves.
double or_grid_search() {
  const int kSteps = 50;
  double best = 0.0;
  for (int i = 0; i <= kSteps; ++i) {
    for (int j = 0; j <= kSteps; ++j) {
      for (int k = 0; k <= kSteps; ++k) {
        const double a1 = double(i) / kSteps, a2 = double(j) / kSteps, cc = double(k) / kSteps;
        CMatrix g = CMatrix::Zero(4, 4);  // order 00, 01, 10, 11
        g(0, 1) = g(1, 0) = a1;
        g(0, 2) = g(2, 0) = a2;
        g(0, 3) = g(3, 0) = cc;
        // Bit 0 differs on (00,10),(00,11); bit 1 on (00,01),(00,11).
        CMatrix g0 = g, g1 = g;
        g0(0, 1) = g0(1, 0) = 0.0;
        g1(0, 2) = g1(2, 0) = 0.0;
        if (spectral_norm(g0) > 1.0 + 1e-12 || spectral_norm(g1) > 1.0 + 1e-12) continue;
        best = std::max(best, eig_hermitian(g).eigenvalues.back().real());
      }
    }
  }
  return best;
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

void check_relations(Criterion& c) {
  Rng rng(1009);
  double worst = 0.0;
  auto agree = [&](RelationProblem& p, RelationMode mode, const std::string& tag) {
    const double d = relation_bound(p, mode).value;
    const double pr = relation_primal(p, mode).value;
    worst = std::max(worst, std::abs(d - pr) / (1 + std::abs(d)));
    c.check(std::abs(d - pr) <= 1e-4 * (1 + std::abs(d)), tag + " dual " + fmt(d) + " primal " + fmt(pr));
    return d;
  };
  for (int t = 0; t < 20; ++t) {
    RelationProblem p = random_relation(rng);
    const std::string tag = "instance " + std::to_string(t);
    const double exact = agree(p, RelationMode::exact, tag + " exact");
    double prev = exact;
    for (double eps : {0.05, 0.2}) {
      p.epsilon = eps;
      const double v = agree(p, RelationMode::approx, tag + " approx");
      c.check(v <= prev + 1e-5 * (1 + prev), tag + " epsilon monotone");
      c.check(v <= exact + 1e-5 * (1 + exact), tag + " exact >= approx");
      prev = v;
    }
    p.prior.assign(p.size(), 1.0 / p.size());
    agree(p, RelationMode::average, tag + " average");
  }
  c.note("worst relative disagreement " + fmt(worst));

  const RelationProblem orp = relation_from_strings(2, 2, 2, function_relation({0, 1, 1, 1}));
  const double v = relation_bound(orp, RelationMode::exact).value;
  const double grid = or_grid_search();
  c.check(std::abs(v - std::sqrt(2.0)) <= 1e-3, "OR exact " + fmt(v));
  c.check(std::abs(v - grid) <= 1e-3, "OR grid " + fmt(grid));
  c.note("OR exact " + fmt(v) + " grid " + fmt(grid));
}

void check_purifiers(Criterion& c) {
  Rng rng(1010);
  PurifierInstance b;
  const std::vector<double> w1 = {0.0, 0.25, 0.75, 1.0, 0.1, 0.9};
  for (size_t x = 0; x < w1.size(); ++x) {
    b.labels.push_back(std::to_string(x));
    CVector v(4);
    v << std::sqrt(1 - w1[x]) * random_state(2, rng), std::sqrt(w1[x]) * random_state(2, rng);
    b.psi.push_back(v);
  }
  const PurifierCertificate pb = purify_function_binary(b);
  const double rb = factorization_residual(pb.instance, pb.certificate.primal->upsilon,
                                           pb.certificate.primal->phi);
  c.check(rb <= 1e-7, "binary residual " + fmt(rb));
  c.check(pb.certificate.value <= 14.94, "binary value " + fmt(pb.certificate.value));

  double worst_series = 0.0, worst_value = 0.0;
  for (int t = 0; t < 6; ++t) {
    PurifierInstance p;
    p.delta = 0.3;
    for (int x = 0; x < 4; ++x) {
      p.labels.push_back(std::to_string(x));
      const CMatrix pr = random_projector(3, random_int(rng, 1, 2), rng);
      CVector v;
      do {
        v = random_state(3, rng);
      } while ((pr * v).squaredNorm() < p.delta);
      p.psi.push_back(v);
      p.projectors.push_back(pr);
    }
    const GeneralPurifier g = purify_general(p);
    const Gamma2Certificate& cert = g.purifier.certificate;
    const std::string tag = "general " + std::to_string(t);
    c.check(factorization_residual(g.purifier.instance, cert.primal->upsilon, cert.primal->phi) <= 1e-7,
            tag + " residual");
    c.check(cert.tail <= 1e-6 && cert.value <= 2.0 / p.delta + cert.tail, tag + " value " + fmt(cert.value));
    const double sdp = gamma2_value(g.purifier.instance);
    c.check(sdp <= cert.value + 1e-5, tag + " SDP " + fmt(sdp));
    worst_value = std::max(worst_value, cert.value);
    for (int x = 0; x < p.size(); ++x) {
      for (int y = 0; y < p.size(); ++y) {
        const CVector gx = p.projectors[x] * p.psi[x], gy = p.projectors[y] * p.psi[y];
        const cd q = (p.psi[x] - gx).dot(p.psi[y] - gy);
        cd term = gx.dot(gy), sum = 0.0;
        for (int k = 0; k < 1000; ++k, term *= q) sum += term;
        worst_series = std::max(worst_series, std::abs(sum - g.sigma_gram(x, y)));
      }
    }
  }
  c.check(worst_series <= 1e-9, "series " + fmt(worst_series));

  const CMatrix m = random_matrix(3, 3, rng);
  const CMatrix x = 0.8 / gamma2_value(plain_instance(m), 1e-9) * m;
  const GeometricCertificate geo = geometric_certificate(x, 0, 1e-9);
  c.check(geo.cert.value <= 5.0 + geo.cert.tail + 1e-6, "geometric " + fmt(geo.cert.value));
  c.note("binary " + fmt(pb.certificate.value) + ", general max " + fmt(worst_value) + ", series " +
         fmt(worst_series) + ", geometric " + fmt(geo.cert.value));
}

void check_kothari(Criterion& c) {
  std::vector<double> v;
  for (int n : {2, 3, 4}) v.push_back(tadv(make_kothari_parity(n), TargetKind::states).value());
  c.check(v[2] <= 1.5 * v[0], "n=4 " + fmt(v[2]) + " vs n=2 " + fmt(v[0]));
  c.note("values " + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]));
}

}  // namespace
}  // namespace advbound

int main() {
  using namespace advbound;
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"strong duality", check_strong_duality},
      {"gamma2 properties", check_gamma2_properties},
      {"amplitude amplification", check_amplitude_amplification},
      {"paradox pair", check_paradox_pair},
      {"conversion simulator", check_converter},
      {"effective spectral gap", check_spectral_gap},
      {"algorithm extraction", check_extraction},
      {"standard-oracle certificate", check_standard_oracle},
      {"relations", check_relations},
      {"purifiers", check_purifiers},
      {"parity family", check_kothari},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok()) ++failed;
    std::printf("criterion %2zu %-28s %s  (%.1fs) %s\n", i + 1, criteria[i].first.c_str(),
                c.ok() ? "PASS" : "FAIL", secs, c.detail().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
