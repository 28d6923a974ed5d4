// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances and thresholds are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "singcert/deflation.hpp"
#include "singcert/dualspace.hpp"
#include "support.hpp"

using namespace singcert;
using namespace singcert::test;

namespace {

int g_failures = 0;

void criterion(int n, const std::string& what, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", n, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

KernelFrame symmetric_cubes_frame() {
  CMatrix V1(3, 3);
  V1 << Complex(-1.0 / 3), Complex(2.0 / 3), Complex(2.0 / 3),
        Complex(2.0 / 3), Complex(-1.0 / 3), Complex(2.0 / 3),
        Complex(2.0 / 3), Complex(2.0 / 3), Complex(-1.0 / 3);
  return explicit_frame(V1, CMatrix(3, 0));
}

// ---------------------------------------------------------------------------

void criterion1_universal_constant() {
  auto t0 = std::chrono::steady_clock::now();
  UniversalConstant uc = universal_d(1);
  double ms = ms_since(t0);
  bool in_range = uc.d >= 0.2975 && uc.d <= 0.2977;
  bool tight = uc.residual <= 1e-12;
  bool fast = ms < 1.0;
  criterion(1, "universal constant d(1) in [0.2975, 0.2977], |h(d)| <= 1e-12, < 1 ms",
            in_range && tight && fast,
            "d = " + fmt(uc.d) + ", |h| = " + fmt(uc.residual) + ", " + fmt(ms) + " ms");
}

void criterion2_dual_oracle() {
  bool ok = true;
  std::string detail;
  struct Want {
    const char* name;
    int kappa, rho, mu;
    bool check_rho;
  };
  const Want wants[] = {{"cyclic_cubes", 3, 4, 11, true},
                        {"shifted_cubes", 3, 0, 8, false},
                        {"cyclic_quartics", 3, 0, 14, false}};
  for (const Want& w : wants) {
    Case c = load_case(w.name);
    auto t0 = std::chrono::steady_clock::now();
    DualInvariants di = dual_invariants(c.f, c.x);
    double ms = ms_since(t0);
    bool good = di.breadth == w.kappa && di.multiplicity == w.mu &&
                (!w.check_rho || di.depth == w.rho) && ms < 10000.0;
    if (!good) ok = false;
    detail += std::string(w.name) + "=(" + std::to_string(di.breadth) + "," +
              std::to_string(di.depth) + "," + std::to_string(di.multiplicity) + ") in " +
              fmt(ms) + " ms; ";
  }
  // x^n family: mu = 2 + 3n for n = 3 (cubes above) and n = 4 (quartics above)
  criterion(2, "dual oracle: cubes (3,4,11), shifted cubes (3,.,8), x^n family mu = 2+3n, each < 10 s", ok,
            detail);
}

void criterion3_multiplicity_floor() {
  bool ok = true;
  std::string detail;
  for (const auto& name : all_cases()) {
    Case c = load_case(name);
    DualInvariants di = dual_invariants(c.f, c.x);
    if (di.multiplicity > 1) {
      bool holds = di.multiplicity >= (1 << di.breadth);
      if (!holds) {
        ok = false;
        detail += std::string(name) + " violates; ";
      }
    }
  }
  if (ok) detail = "all corpus multiple zeros satisfy mu >= 2^kappa";
  criterion(3, "multiplicity floor mu >= 2^kappa over the corpus", ok, detail);
}

void criterion4_operator_reproduction() {
  // clause (a): cubes with the symmetric frame vs the published matrix
  Case cubes = load_case("cyclic_cubes");
  CertOperators ops = operator_A(cubes.f, cubes.x, symmetric_cubes_frame());
  CMatrix spec_matrix(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      spec_matrix(i, j) = i == j ? Complex(-2.0 / 9) : Complex(1.0 / 9);
  double dev_a = (ops.A - spec_matrix).cwiseAbs().maxCoeff();
  bool clause_a = dev_a <= 1e-12;

  // clause (b): sin truncation with the standard frame
  Case sins = load_case("sin_cubes_trunc");
  CertOperators ops2 =
      operator_A(sins.f, sins.x, explicit_frame(CMatrix::Identity(3, 3), CMatrix(3, 0)));
  CMatrix expect2(3, 3);
  expect2 << Complex(-1), Complex(0), Complex(1),
             Complex(0), Complex(-1), Complex(1),
             Complex(0), Complex(0), Complex(1);
  double dev_b = (ops2.A - expect2).cwiseAbs().maxCoeff();
  bool clause_b = dev_b <= 1e-12;

  std::string detail = "cubes: max|A - [[-2/9,1/9,..]]| = " + fmt(dev_a) +
                       " (formula gives diag 4/9, off -2/9 = -2x the displayed matrix, "
                       "and both are singular at this frame); sin: max dev = " +
                       fmt(dev_b);
  criterion(4, "operator reproduction (published matrices)", clause_a && clause_b, detail);
}

void criterion5_onestep_equivalence() {
  const double tol = 1e-8;
  int total = 0, borderline = 0, disagreements = 0;
  auto run_trials = [&](const PolySystem& f, const CVector& x, int trials, std::uint64_t seed) {
    EquivalenceReport eq = one_step_equivalence_check(f, x, trials, seed, tol);
    if (eq.vacuous) return;
    for (const auto& t : eq.detail) {
      ++total;
      auto is_borderline = [&](double rel) { return rel > tol / 10 && rel < tol * 10; };
      if (is_borderline(t.b_rel_sigma) || is_borderline(t.dg_rel_sigma)) {
        ++borderline;
        continue;
      }
      if (t.b_full != t.dg_full) ++disagreements;
    }
  };
  for (const auto& name : all_cases()) {
    Case c = load_case(name);
    run_trials(c.f, c.x, 20, 77);
  }
  Rng rng(505);
  for (int i = 0; i < 50; ++i) {
    int n = 2 + static_cast<int>(rng.uniform(0.0, 2.999));
    int kappa = 1 + static_cast<int>(rng.uniform(0.0, n - 0.001));
    PolySystem f = random_singular_system(n, kappa, 3, rng);
    run_trials(f, CVector::Zero(n), 4, 900 + i);
  }
  bool ok = disagreements == 0 && borderline <= total / 20;  // <= 5% of trials
  criterion(5, "one-step characterization: B vs deflated-Jacobian verdicts agree", ok,
            std::to_string(total) + " trials, " + std::to_string(disagreements) +
                " disagreements, " + std::to_string(borderline) + " borderline");
}

void criterion6_separation_reproduction() {
  RunConfig cfg;
  cfg.gamma_override = 11.25;
  CommandResult res = cmd_separation(corpus_file("shifted_cubes", "system.txt"),
                                     corpus_file("shifted_cubes", "point.json"), cfg);
  double radius = res.report["separation"]["radius"].get<double>();
  double d3 = universal_d(3).d;
  double expect = d3 / (2 * 11.25 * 11.25);
  bool exact = std::abs(radius - expect) <= 1e-12 * expect;
  bool near_paper = std::abs(radius - 3e-4) <= 0.1 * 3e-4;

  RunConfig plain;
  CommandResult internal = cmd_separation(corpus_file("shifted_cubes", "system.txt"),
                                          corpus_file("shifted_cubes", "point.json"), plain);
  double g = internal.report["separation"]["gamma"].get<double>();
  double r_int = internal.report["separation"]["radius"].get<double>();
  bool internal_ok = std::isfinite(g) && g >= 1.0 && r_int > 0.0 &&
                     std::abs(r_int - d3 / (2 * g * g)) <= 1e-12;
  criterion(6, "separation reproduction: override radius ~ 0.0003; internal bound finite",
            exact && near_paper && internal_ok,
            "override radius = " + fmt(radius) + ", internal gamma = " + fmt(g) +
                " radius = " + fmt(r_int));
}

void criterion7_certification_reproduction() {
  RunConfig plain;
  auto t0 = std::chrono::steady_clock::now();
  CommandResult base = cmd_certify(corpus_file("shifted_cubes", "system.txt"),
                                   corpus_file("shifted_cubes", "approx_root.json"), plain);
  double ms = ms_since(t0);
  bool certified = base.report["certify"]["verdict"] == "Certified";
  bool floor8 = base.report["certify"]["zero_count_lower_bound"] == 8;

  RunConfig cfg;
  cfg.gamma_override = 11.25;
  CommandResult over = cmd_certify(corpus_file("shifted_cubes", "system.txt"),
                                   corpus_file("shifted_cubes", "approx_root.json"), cfg);
  double lhs = over.report["certify"]["lhs"].get<double>();
  double rhs = over.report["certify"]["rhs"].get<double>();
  double radius = over.report["certify"]["radius_cluster"].get<double>();
  bool lhs_ok = lhs <= 5e-21;
  bool rhs_ok = rhs >= 3e-9;
  bool radius_ok = std::abs(radius - 1.5e-4) <= 0.1 * 1.5e-4;
  bool fast = ms < 1000.0;
  criterion(7,
            "approximate-root certification at t1: Certified, lhs <= 5e-21, rhs >= 3e-9, "
            "radius ~ 0.00015, floor 8, < 1 s",
            certified && floor8 && lhs_ok && rhs_ok && radius_ok && fast,
            std::string("Certified=") + (certified ? "yes" : "no") + ", lhs = " + fmt(lhs) +
                ", rhs = " + fmt(rhs) + " (criterion formula d^3 sigma_min/(32 g^4); the "
                "published 3.4e-9 reference equals d^3/(8 g^4), and sigma_min(A-H) <= 1 forces "
                "rhs <= 8.43e-10 for every admissible frame), radius = " +
                fmt(radius) + ", " + fmt(ms) + " ms");
}

void criterion8_residual_bound_property() {
  bool ok = true;
  std::string detail;
  for (const auto& name : simple_multiple_cases()) {
    Case c = load_case(name);
    RootClassification cls = is_simple_multiple(c.f, c.x, 0);
    if (cls.verdict != RootClass::SimpleMultiple) {
      ok = false;
      detail += std::string(name) + ": not simple multiple; ";
      continue;
    }
    CertOperators ops = operator_A(c.f, c.x, cls.frame);
    double gamma = gamma_bound(c.f, c.x, ops, WhichOperator::A).gamma;
    double d = universal_d(cls.kappa).d;
    double ball = d / (4 * gamma * gamma);
    Rng rng(mix_seed(0, std::hash<std::string>{}(name)));
    int violations = 0;
    for (int s = 0; s < 100; ++s) {
      CVector y = c.x + rng.uniform(0.0, ball) * rng.unit_vector(c.f.nvars);
      if (!residual_lower_bound_check(c.f, c.x, y, ops, gamma, d).holds) ++violations;
    }
    if (violations) {
      ok = false;
      detail += std::string(name) + ": " + std::to_string(violations) + " violations; ";
    }
  }
  if (ok) detail = "100 sampled points per system, zero violations";
  criterion(8, "residual lower bound on sampled balls", ok, detail);
}

void criterion9_inequality_suite() {
  bool ok = true;
  std::string detail;
  for (const auto& name : simple_multiple_cases()) {
    Case c = load_case(name);
    InequalitySuiteReport rep = inequality_suite(c.f, c.x, 1000, 0, {}, 100);
    int fails = rep.large_angle_failures + rep.min_alpha_failures + rep.branch_linear_failures +
                rep.branch_quadratic_failures;
    bool good = fails == 0 && rep.pythagoras_failures == 0 && rep.rescale_failures == 0 &&
                rep.rescale_worst_rel <= 1e-8;
    if (!good) {
      ok = false;
      detail += std::string(name) + ": " + std::to_string(fails) + " bound violations, rescale rel " +
                fmt(rep.rescale_worst_rel) + "; ";
    }
  }
  if (ok) detail = "1000 samples + 100 (alpha, beta) draws per system, zero violations";
  criterion(9, "sampled lower-bound inequalities and the rescaled-operator norm identity", ok, detail);
}

void criterion10_taylor_gamma_soundness() {
  Rng rng(606);
  bool taylor_ok = true, gamma_ok = true;
  int gamma_checked = 0;
  double worst_rel = 0.0;
  for (int i = 0; i < 50; ++i) {
    int n = 2 + static_cast<int>(rng.uniform(0.0, 2.999));
    int kappa = static_cast<int>(rng.uniform(0.0, n + 0.999));
    PolySystem f = kappa == 0 ? random_system(n, 3, rng)
                              : random_singular_system(n, kappa, 3, rng);
    CVector x = kappa == 0 ? rng.gaussian_vector(n) : CVector::Zero(n);

    CVector w = rng.gaussian_vector(n);
    CVector expect = evaluate(f, x + w);
    CVector sum = evaluate(f, x);
    for (int k = 1; k <= f.max_degree(); ++k)
      sum += derivative_tensor(f, x, k).apply_same(w) / factorial(k);
    double rel = (expect - sum).norm() / expect.norm();
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-10) taylor_ok = false;

    KernelFrame frame = numerical_kernel(jacobian(f, x), 1e-8);
    frame = random_orthonormal_kernel_basis(frame, 3000 + i);
    CertOperators ops = operator_A(f, x, frame);
    if (ops.sigma_min_A <= rank_threshold(ops.sigma_max_A, 1e-8)) continue;  // skip degenerate draws
    GammaBound gb = gamma_bound(f, x, ops, WhichOperator::A);
    Eigen::PartialPivLU<CMatrix> lu(ops.A);
    ++gamma_checked;
    for (const auto& e : gb.per_k) {
      DerivTensor t = derivative_tensor(f, x, e.k);
      for (int s = 0; s < 10000; ++s) {
        CVector u = rng.unit_vector(n);
        double sample = lu.solve(t.apply_same(u)).norm() / factorial(e.k);
        if (sample > e.bound * (1 + 1e-12)) gamma_ok = false;
      }
    }
  }
  criterion(10, "Taylor exactness (1e-10) and certified gamma dominates MC lower bounds",
            taylor_ok && gamma_ok,
            "50 systems, worst Taylor rel err = " + fmt(worst_rel) + ", gamma checked on " +
                std::to_string(gamma_checked) + " instances x 10^4 directions per order");
}

}  // namespace

int main() {
  std::printf("singcert acceptance suite (corpus: %s)\n", SINGCERT_CORPUS_DIR);
  criterion1_universal_constant();
  criterion2_dual_oracle();
  criterion3_multiplicity_floor();
  criterion4_operator_reproduction();
  criterion5_onestep_equivalence();
  criterion6_separation_reproduction();
  criterion7_certification_reproduction();
  criterion8_residual_bound_property();
  criterion9_inequality_suite();
  criterion10_taylor_gamma_soundness();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
