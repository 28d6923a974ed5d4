#include "singcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "singcert/deflation.hpp"
#include "singcert/rng.hpp"

namespace singcert {

double CertOperators::inv_norm_A() const {
  if (sigma_min_A <= 0.0) throw SingularOperatorError("operator A is singular");
  return 1.0 / sigma_min_A;
}

double CertOperators::inv_norm_AmH() const {
  if (sigma_min_AmH <= 0.0) throw SingularOperatorError("operator A - H is singular");
  return 1.0 / sigma_min_AmH;
}

CertOperators operator_A(const PolySystem& f, const CVector& x, const KernelFrame& frame) {
  const int n = f.nvars;
  if (f.size() != n) throw DimensionError("operator_A requires a square system");
  if (frame.n() != n) throw DimensionError("frame dimension does not match system");
  CertOperators ops;
  ops.frame = frame;
  CMatrix J = jacobian(f, x);
  DerivTensor hes = derivative_tensor(f, x, 2);
  ops.A = J;
  for (int i = 0; i < frame.kappa; ++i) {
    CVector v = frame.V1.col(i);
    CVector h = hes.apply({v, v});
    ops.hes_vv.push_back(h);
    ops.A += 0.5 * h * v.adjoint();
  }
  ops.H = frame.kappa > 0 ? CMatrix(J * frame.V1 * frame.V1.adjoint())
                          : CMatrix(CMatrix::Zero(n, n));
  ops.AmH = ops.A - ops.H;
  SvdResult da = svd(ops.A);
  ops.sigma_max_A = da.sigma(0);
  ops.sigma_min_A = da.sigma(n - 1);
  SvdResult dm = svd(ops.AmH);
  ops.sigma_max_AmH = dm.sigma(0);
  ops.sigma_min_AmH = dm.sigma(n - 1);
  ops.norm_H = op_norm(ops.H);
  return ops;
}

CMatrix operator_A_alpha(const PolySystem& f, const CVector& x, const KernelFrame& frame,
                         const CVector& alpha) {
  const int n = f.nvars;
  if (f.size() != n) throw DimensionError("operator_A_alpha requires a square system");
  if (alpha.size() != frame.kappa) throw DimensionError("alpha length must equal kappa");
  CMatrix A = jacobian(f, x);
  DerivTensor hes = derivative_tensor(f, x, 2);
  for (int i = 0; i < frame.kappa; ++i) {
    CVector v = frame.V1.col(i);
    A += alpha(i) * hes.apply({v, v}) * v.adjoint();
  }
  return A;
}

GammaBound gamma_bound(const PolySystem& f, const CVector& x, const CertOperators& ops,
                       WhichOperator which, double rank_tol) {
  const CMatrix& op = which == WhichOperator::A ? ops.A : ops.AmH;
  double smin = which == WhichOperator::A ? ops.sigma_min_A : ops.sigma_min_AmH;
  double smax = which == WhichOperator::A ? ops.sigma_max_A : ops.sigma_max_AmH;
  if (smin <= rank_threshold(smax, rank_tol))
    throw SingularOperatorError("gamma bound needs a nonsingular operator");
  GammaBound gb;
  gb.operator_used = which;
  Eigen::PartialPivLU<CMatrix> lu(op);
  int maxdeg = f.max_degree();
  for (int k = 2; k <= maxdeg; ++k) {
    DerivTensor t = derivative_tensor(f, x, k);
    double sum = 0.0;
    for (const auto& [alpha, vals] : t.entries()) {
      CVector solved = lu.solve(vals);
      sum += multinomial(k, alpha) * solved.squaredNorm();
    }
    GammaEntry e;
    e.k = k;
    e.bound = std::sqrt(sum) / factorial(k);
    e.root = std::pow(e.bound, 1.0 / (k - 1));
    gb.per_k.push_back(e);
    gb.gamma = std::max(gb.gamma, e.root);
  }
  return gb;
}

const char* to_string(DVariant v) { return v == DVariant::paper ? "paper" : "kappa2"; }

namespace {

double d_equation(double d, int kappa, DVariant variant) {
  double root = std::sqrt(1.0 - d * d);
  double quad = variant == DVariant::paper ? kappa * d * d
                                           : static_cast<double>(kappa) * kappa * d * d;
  return root - (kappa + 1.0) * kappa * d * root - quad - d;
}

}  // namespace

UniversalConstant universal_d(int kappa, DVariant variant) {
  if (kappa < 1) throw DimensionError("universal_d requires kappa >= 1");
  UniversalConstant uc;
  uc.kappa = kappa;
  const double step = 1e-3;
  double lo = 0.0;
  double hi = step;
  while (hi < 1.0 && d_equation(hi, kappa, variant) > 0.0) {
    lo = hi;
    hi += step;
  }
  if (hi >= 1.0) throw NoRootError("no sign change of the d-equation in (0, 1)");
  while (hi - lo > 1e-14) {
    double mid = 0.5 * (lo + hi);
    if (d_equation(mid, kappa, variant) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  uc.d = 0.5 * (lo + hi);
  uc.residual = std::abs(d_equation(uc.d, kappa, variant));
  return uc;
}

SeparationResult separation_bound(const PolySystem& f, const CVector& x, std::uint64_t seed,
                                  const CertifyConfig& cfg) {
  RootClassification cls = is_simple_multiple(f, x, seed, cfg.rank_tol, cfg.res_tol);
  if (cls.verdict != RootClass::SimpleMultiple)
    throw SingularOperatorError(std::string("separation bound requires a simple multiple root"
                                            " (verdict: ") +
                                to_string(cls.verdict) + ")");
  CertOperators ops = operator_A(f, x, cls.frame);
  SeparationResult out;
  out.kappa = cls.kappa;
  if (cfg.gamma_override) {
    out.gamma = *cfg.gamma_override;
    out.gamma_overridden = true;
  } else {
    out.gamma = gamma_bound(f, x, ops, WhichOperator::A, cfg.rank_tol).gamma;
  }
  out.d = universal_d(cls.kappa, cfg.d_variant).d;
  out.radius = out.d / (2.0 * out.gamma * out.gamma);
  return out;
}

ResidualBoundCheck residual_lower_bound_check(const PolySystem& f, const CVector& x,
                                              const CVector& y, const CertOperators& ops,
                                              double gamma, double d) {
  double dist = (y - x).norm();
  double ball = d / (4.0 * gamma * gamma);
  if (dist > ball * (1.0 + 1e-12))
    throw RadiusError("point lies outside the ball of radius d/(4 gamma^2)");
  ResidualBoundCheck out;
  out.lhs = evaluate(f, y).norm();
  out.rhs = d * dist * dist / (2.0 * ops.inv_norm_A());
  out.holds = out.lhs >= out.rhs;
  return out;
}

ClusterCriterionResult cluster_criterion(const PolySystem& f, const PolySystem& g,
                                         const CVector& x, double radius, std::uint64_t seed,
                                         const CertifyConfig& cfg, std::optional<int> mu) {
  RootClassification cls = is_simple_multiple(f, x, seed, cfg.rank_tol, cfg.res_tol);
  if (cls.verdict != RootClass::SimpleMultiple)
    throw SingularOperatorError(std::string("cluster criterion requires a simple multiple root"
                                            " (verdict: ") +
                                to_string(cls.verdict) + ")");
  CertOperators ops = operator_A(f, x, cls.frame);
  double gamma = cfg.gamma_override
                     ? *cfg.gamma_override
                     : gamma_bound(f, x, ops, WhichOperator::A, cfg.rank_tol).gamma;
  double d = universal_d(cls.kappa, cfg.d_variant).d;
  double ball = d / (4.0 * gamma * gamma);
  if (!(radius > 0.0) || radius > ball * (1.0 + 1e-12))
    throw RadiusError("cluster criterion requires 0 < R <= d/(4 gamma^2)");
  ClusterCriterionResult out;
  out.kappa = cls.kappa;
  out.gamma = gamma;
  out.radius = radius;
  out.d_r_bound = taylor_norm_bound(subtract(f, g), x, radius);
  out.threshold = d * radius * radius / (2.0 * ops.inv_norm_A());
  out.certified = out.d_r_bound < out.threshold;
  out.mu_known = mu.has_value();
  out.zero_count = mu ? static_cast<long long>(*mu) : (1LL << cls.kappa);
  return out;
}

const char* to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::Certified: return "Certified";
    case CertVerdict::NotCertified: return "NotCertified";
    case CertVerdict::PreconditionFailed: return "PreconditionFailed";
  }
  return "?";
}

CertReport certify_cluster(const PolySystem& f, const CVector& x, std::uint64_t seed,
                           const CertifyConfig& cfg) {
  CertReport rep;
  rep.seed = seed;
  rep.rank_tol = cfg.rank_tol;
  rep.res_tol = cfg.res_tol;
  rep.d_variant = cfg.d_variant;
  if (f.size() != f.nvars) throw DimensionError("certify_cluster requires a square system");

  rep.residual = evaluate(f, x).norm();
  CMatrix J = jacobian(f, x);
  KernelFrame base = numerical_kernel(J, cfg.rank_tol);
  rep.kappa = base.kappa;
  if (base.kappa == 0) {
    rep.verdict = CertVerdict::PreconditionFailed;
    rep.reason = "Regular";  // the certification needs kappa >= 1
    return rep;
  }
  KernelFrame frame = random_orthonormal_kernel_basis(base, seed);

  // rank Df(x)|_{span^perp} = n - kappa
  const int n = f.nvars;
  double sigma_max_J = op_norm(J);
  rep.precond_sigma_threshold = rank_threshold(sigma_max_J, cfg.rank_tol);
  if (base.kappa < n) {
    CMatrix JV2 = J * frame.V2;
    Eigen::VectorXd s = svd(JV2).sigma;
    rep.precond_sigma = s(s.size() - 1);
  } else {
    rep.precond_sigma = std::numeric_limits<double>::infinity();
  }
  bool precond_ok = base.kappa == n || rep.precond_sigma > rep.precond_sigma_threshold;

  // D^2 f(x)(v_i, v_i) not in im Df(x)|_{span^perp}
  CertOperators ops = operator_A(f, x, frame);
  CMatrix JV2 = base.kappa < n ? CMatrix(J * frame.V2) : CMatrix(n, 0);
  for (int i = 0; i < frame.kappa; ++i) {
    double resid = least_squares_residual(JV2, ops.hes_vv[i]);
    double thr = 1e-8 * ops.hes_vv[i].norm();
    rep.precond_ls_residuals.push_back(resid);
    rep.precond_ls_thresholds.push_back(thr);
    if (!(resid > thr)) precond_ok = false;
  }
  if (!precond_ok) {
    rep.verdict = CertVerdict::PreconditionFailed;
    rep.reason = "rank/image preconditions not met";
    return rep;
  }

  rep.norm_H = ops.norm_H;
  rep.sigma_min_AmH = ops.sigma_min_AmH;
  if (ops.sigma_min_AmH <= rank_threshold(ops.sigma_max_AmH, cfg.rank_tol)) {
    rep.verdict = CertVerdict::PreconditionFailed;
    rep.reason = "operator A - H numerically singular";
    return rep;
  }

  if (cfg.gamma_override) {
    rep.gamma = *cfg.gamma_override;
    rep.gamma_overridden = true;
  } else {
    GammaBound gb = gamma_bound(f, x, ops, WhichOperator::AmH, cfg.rank_tol);
    rep.gamma = gb.gamma;
    rep.gamma_per_k = gb.per_k;
  }
  UniversalConstant uc = universal_d(base.kappa, cfg.d_variant);
  rep.d = uc.d;
  rep.d_residual = uc.residual;
  const double g2 = rep.gamma * rep.gamma;
  rep.radius_separation = rep.d / (2.0 * g2);
  rep.radius_cluster = rep.d / (4.0 * g2);
  rep.lhs = rep.residual + rep.norm_H * rep.radius_cluster;
  rep.rhs = rep.d * rep.d * rep.d * ops.sigma_min_AmH / (32.0 * g2 * g2);
  rep.zero_count_lower_bound = 1LL << base.kappa;
  rep.verdict = rep.lhs < rep.rhs ? CertVerdict::Certified : CertVerdict::NotCertified;
  return rep;
}

namespace {

// Projective angle d_P(a,b) = arccos(|<a,b>| / (||a|| ||b||)), argument clamped
// against rounding.
double angle(const CVector& a, const CVector& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::acos(0.0);
  double c = std::abs((b.adjoint() * a)(0, 0)) / (na * nb);
  return std::acos(std::clamp(c, 0.0, 1.0));
}

}  // namespace

InequalitySuiteReport inequality_suite(const PolySystem& f, const CVector& x, int samples,
                             std::uint64_t seed, const CertifyConfig& cfg, int rescale_draws) {
  RootClassification cls = is_simple_multiple(f, x, seed, cfg.rank_tol, cfg.res_tol);
  if (cls.verdict != RootClass::SimpleMultiple)
    throw SingularOperatorError("inequality suite requires an exact simple multiple root");
  const KernelFrame& frame = cls.frame;
  const int n = f.nvars;
  const int kappa = frame.kappa;
  CertOperators ops = operator_A(f, x, frame);
  double gamma = cfg.gamma_override
                     ? *cfg.gamma_override
                     : gamma_bound(f, x, ops, WhichOperator::A, cfg.rank_tol).gamma;
  UniversalConstant uc = universal_d(kappa, cfg.d_variant);
  double theta = std::asin(std::clamp(uc.d / gamma, 0.0, 1.0));

  InequalitySuiteReport rep;
  rep.gamma = gamma;
  rep.theta = theta;
  rep.large_angle_worst_margin = std::numeric_limits<double>::infinity();
  rep.min_alpha_worst_margin = std::numeric_limits<double>::infinity();
  rep.branch_linear_worst_margin = std::numeric_limits<double>::infinity();
  rep.branch_quadratic_worst_margin = std::numeric_limits<double>::infinity();
  rep.rescale_worst_rel = 0.0;

  Eigen::PartialPivLU<CMatrix> luA(ops.A);
  Rng rng(mix_seed(seed, 0x6c656d6d61ull));  // sample-stream tag

  for (int s = 0; s < samples; ++s) {
    CVector w;
    CVector alphas(kappa);
    double min_alpha = 0.0;
    double nw = 0.0;
    for (;;) {
      CVector u = rng.unit_vector(n);
      double r = rng.uniform(0.0, 0.5 / gamma);
      w = r * u;
      nw = w.norm();
      if (nw == 0.0) continue;
      for (int i = 0; i < kappa; ++i) alphas(i) = (frame.V1.col(i).adjoint() * w)(0, 0);
      min_alpha = alphas.cwiseAbs().minCoeff();
      if (min_alpha >= 1e-12 * nw) break;
      ++rep.resampled;  // the min-alpha bound divides by min|alpha_i|; excluded and logged
    }
    CVector what = w - frame.V1 * alphas;
    CVector proj = w - what;  // component in span{v_1..v_kappa}
    double phi = proj.norm() > 1e-300 ? angle(proj, w) : std::acos(0.0);
    std::vector<double> phis(kappa);
    for (int i = 0; i < kappa; ++i) phis[i] = angle(frame.V1.col(i), w);

    double cos2 = std::cos(phi) * std::cos(phi);
    double sum_cos2 = 0.0;
    for (double p : phis) sum_cos2 += std::cos(p) * std::cos(p);
    double pyth = std::abs(cos2 - sum_cos2);
    rep.pythagoras_worst = std::max(rep.pythagoras_worst, pyth);
    if (pyth > 1e-10) ++rep.pythagoras_failures;

    CVector y = x + w;
    double lhs = luA.solve(evaluate(f, y)).norm();

    if (phi >= theta) {
      double rhs1 = nw * std::sin(theta) - 2.0 * gamma * nw * nw;
      ++rep.large_angle_checked;
      rep.large_angle_worst_margin = std::min(rep.large_angle_worst_margin, lhs - rhs1);
      if (lhs < rhs1) ++rep.large_angle_failures;

      double rhs4 = 2.0 * gamma * nw * (std::sin(theta) / (2.0 * gamma) - nw);
      ++rep.branch_linear_checked;
      rep.branch_linear_worst_margin = std::min(rep.branch_linear_worst_margin, lhs - rhs4);
      if (lhs < rhs4) ++rep.branch_linear_failures;
    }
    if (phi <= theta) {
      double rhs4 = 2.0 * gamma * gamma * nw * nw * (std::sin(theta) / (2.0 * gamma) - nw);
      ++rep.branch_quadratic_checked;
      rep.branch_quadratic_worst_margin = std::min(rep.branch_quadratic_worst_margin, lhs - rhs4);
      if (lhs < rhs4) ++rep.branch_quadratic_failures;
    }

    double sum_sc = 0.0, sum_s2 = 0.0;
    for (double p : phis) {
      sum_sc += std::sin(p) * std::cos(p);
      sum_s2 += std::sin(p) * std::sin(p);
    }
    double rhs3 = nw * min_alpha - (kappa + 1.0) * gamma * nw * nw * sum_sc -
                  gamma * nw * nw * sum_s2 - 2.0 * gamma * gamma * nw * nw * nw;
    ++rep.min_alpha_checked;
    rep.min_alpha_worst_margin = std::min(rep.min_alpha_worst_margin, lhs - rhs3);
    if (lhs < rhs3) ++rep.min_alpha_failures;

    ++rep.samples;
  }

  // Rescaled-operator norm identity: ||A_alpha^-1 A_beta|| = max{1, |beta_i/alpha_i|}.
  for (int t = 0; t < rescale_draws; ++t) {
    CVector alpha(kappa), beta(kappa);
    do {
      for (int i = 0; i < kappa; ++i) alpha(i) = rng.cgaussian();
    } while (alpha.cwiseAbs().minCoeff() < 0.05);
    do {
      for (int i = 0; i < kappa; ++i) beta(i) = rng.cgaussian();
    } while (beta.cwiseAbs().minCoeff() < 0.05);
    CMatrix Aa = operator_A_alpha(f, x, frame, alpha);
    CMatrix Ab = operator_A_alpha(f, x, frame, beta);
    // The "1" comes from the identity action on span{v}^perp, which is empty
    // when kappa = n.
    double expected = kappa < n ? 1.0 : 0.0;
    for (int i = 0; i < kappa; ++i)
      expected = std::max(expected, std::abs(beta(i)) / std::abs(alpha(i)));
    double got = op_norm(Aa.partialPivLu().solve(Ab));
    double rel = std::abs(got - expected) / expected;
    rep.rescale_worst_rel = std::max(rep.rescale_worst_rel, rel);
    if (rel > 1e-8) ++rep.rescale_failures;
    ++rep.rescale_draws;
  }
  return rep;
}

}  // namespace singcert
