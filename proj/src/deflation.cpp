#include "singcert/deflation.hpp"

#include <cmath>

#include "singcert/certify.hpp"
#include "singcert/rng.hpp"

namespace singcert {

CharacterizationMatrix build_characterization_matrix(const PolySystem& f, const CVector& x,
                                                     const KernelFrame& frame,
                                                     double rank_tol) {
  if (frame.kappa < 1)
    throw DimensionError("characterization matrix undefined for kappa = 0 (regular root)");
  const int n = f.nvars;
  if (f.size() != n) throw DimensionError("characterization matrix requires a square system");
  DerivTensor hes = derivative_tensor(f, x, 2);
  CMatrix J = jacobian(f, x);
  CharacterizationMatrix out;
  out.frame = frame;
  out.B = CMatrix(n, n);
  for (int i = 0; i < frame.kappa; ++i) {
    CVector v = frame.V1.col(i);
    out.B.col(i) = hes.apply({v, v});
  }
  if (frame.kappa < n) out.B.rightCols(n - frame.kappa) = J * frame.V2;
  out.det_abs = std::abs(out.B.fullPivLu().determinant());
  SvdResult dec = svd(out.B);
  out.sigma_max = dec.sigma(0);
  out.sigma_min = dec.sigma(n - 1);
  out.full_rank = rank_from_sigma(dec.sigma, rank_tol) == n;
  return out;
}

DeflationStep deflate_once(const PolySystem& f, const CVector& x, const KernelFrame& frame,
                           const CVector& lambda1, double rank_tol) {
  if (frame.kappa < 1) throw DimensionError("deflate_once requires kappa >= 1");
  const int n = f.nvars;
  if (f.size() != n) throw DimensionError("deflate_once requires a square system");
  if (lambda1.size() != frame.kappa) throw DimensionError("lambda1 length must equal kappa");

  DeflationStep step;
  step.lambda1 = lambda1;
  step.V = CMatrix(n, n);
  step.V.leftCols(frame.kappa) = frame.V1;
  if (frame.kappa < n) step.V.rightCols(n - frame.kappa) = frame.V2;

  // Augmented system g(x, lambda2) = [f; Df(X) (V1 lambda1 + V2 lambda2)] in
  // 2n - kappa variables (x-block first, then lambda2).
  const int nl2 = n - frame.kappa;
  const int nv = n + nl2;
  PolySystem g;
  g.nvars = nv;
  for (int j = 0; j < n; ++j) g.var_names.push_back("x" + std::to_string(j + 1));
  for (int j = 0; j < nl2; ++j) g.var_names.push_back("l" + std::to_string(j + 1));
  auto lift = [&](const Polynomial& p) {
    Polynomial q(nv);
    for (const auto& [e, c] : p.terms()) {
      Exponents e2 = e;
      e2.resize(nv, 0);
      q.add_term(e2, c);
    }
    return q;
  };
  for (int i = 0; i < n; ++i) g.polys.push_back(lift(f.polys[i]));
  for (int i = 0; i < n; ++i) {
    Polynomial row(nv);
    for (int j = 0; j < n; ++j) {
      Polynomial dij = lift(f.polys[i].differentiated(j));
      // (V1 lambda1)_j is a constant; (V2 lambda2)_j is linear in lambda2.
      Complex cj(0.0, 0.0);
      for (int t = 0; t < frame.kappa; ++t) cj += frame.V1(j, t) * lambda1(t);
      row += dij.scaled(cj);
      for (int t = 0; t < nl2; ++t) {
        Polynomial l2(nv);
        Exponents e(nv, 0);
        e[n + t] = 1;
        l2.add_term(e, frame.V2(j, t));
        row += dij * l2;
      }
    }
    g.polys.push_back(row);
  }
  step.g = g;

  // Jacobian of g at (x, 0):  [ Df       0      ]
  //                           [ Hes(V1 l1, .)  Df V2 ]
  CMatrix J = jacobian(f, x);
  DerivTensor hes = derivative_tensor(f, x, 2);
  CVector dir = frame.V1 * lambda1;
  CMatrix bottom_left(n, n);
  for (int j = 0; j < n; ++j) {
    CVector ej = CVector::Zero(n);
    ej(j) = Complex(1.0, 0.0);
    bottom_left.col(j) = hes.apply({dir, ej});
  }
  step.Dg = CMatrix::Zero(2 * n, nv);
  step.Dg.topLeftCorner(n, n) = J;
  step.Dg.bottomLeftCorner(n, n) = bottom_left;
  if (nl2 > 0) step.Dg.bottomRightCorner(n, nl2) = J * frame.V2;

  SvdResult dec = svd(step.Dg);
  step.sigma_max = dec.sigma(0);
  step.sigma_min = dec.sigma(dec.sigma.size() - 1);
  step.full_rank = rank_from_sigma(dec.sigma, rank_tol) == nv;
  return step;
}

DeflationStep deflate_once(const PolySystem& f, const CVector& x, const KernelFrame& frame,
                           std::uint64_t seed, double rank_tol) {
  Rng rng(mix_seed(seed, 0x6c616d626461ull));  // "lambda"
  CVector lambda1 = rng.unit_vector(frame.kappa);
  return deflate_once(f, x, frame, lambda1, rank_tol);
}

EquivalenceReport one_step_equivalence_check(const PolySystem& f, const CVector& x,
                                             int trials, std::uint64_t seed,
                                             double rank_tol) {
  if (trials < 1) throw DimensionError("one_step_equivalence_check requires trials >= 1");
  EquivalenceReport rep;
  KernelFrame base = numerical_kernel(jacobian(f, x), rank_tol);
  if (base.kappa == 0) {
    rep.vacuous = true;
    return rep;
  }
  for (int t = 0; t < trials; ++t) {
    KernelFrame frame = random_orthonormal_kernel_basis(base, mix_seed(seed, 1000 + t));
    CharacterizationMatrix cm = build_characterization_matrix(f, x, frame, rank_tol);
    DeflationStep step = deflate_once(f, x, frame, mix_seed(seed, 2000 + t), rank_tol);
    EquivalenceTrial trial;
    trial.b_full = cm.full_rank;
    trial.dg_full = step.full_rank;
    trial.b_rel_sigma = cm.sigma_max > 0.0 ? cm.sigma_min / cm.sigma_max : 0.0;
    trial.dg_rel_sigma = step.sigma_max > 0.0 ? step.sigma_min / step.sigma_max : 0.0;
    rep.detail.push_back(trial);
    ++rep.trials;
    if (trial.b_full == trial.dg_full) ++rep.agreements;
    if (trial.b_full && trial.dg_full) ++rep.both_full;
    auto borderline = [&](double rel) { return rel > rank_tol / 10.0 && rel < rank_tol * 10.0; };
    if (borderline(trial.b_rel_sigma) || borderline(trial.dg_rel_sigma)) ++rep.borderline;
  }
  return rep;
}

const char* to_string(RootClass c) {
  switch (c) {
    case RootClass::Regular: return "Regular";
    case RootClass::SimpleMultiple: return "SimpleMultiple";
    case RootClass::NotSimple: return "NotSimple";
    case RootClass::NotARoot: return "NotARoot";
  }
  return "?";
}

RootClassification is_simple_multiple(const PolySystem& f, const CVector& x,
                                      std::uint64_t seed, double rank_tol, double res_tol) {
  if (f.size() != f.nvars) throw DimensionError("is_simple_multiple requires a square system");
  RootClassification out;
  out.residual = evaluate(f, x).norm();
  if (out.residual > res_tol) {
    out.verdict = RootClass::NotARoot;
    return out;
  }
  KernelFrame base = numerical_kernel(jacobian(f, x), rank_tol);
  out.kappa = base.kappa;
  if (base.kappa == 0) {
    out.verdict = RootClass::Regular;
    return out;
  }
  out.frame = random_orthonormal_kernel_basis(base, seed);
  CertOperators ops = operator_A(f, x, out.frame);
  out.sigma_min_A = ops.sigma_min_A;
  out.sigma_max_A = ops.sigma_max_A;
  bool nonsingular = ops.sigma_min_A > rank_threshold(ops.sigma_max_A, rank_tol);
  out.verdict = nonsingular ? RootClass::SimpleMultiple : RootClass::NotSimple;
  return out;
}

}  // namespace singcert
