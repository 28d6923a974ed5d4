#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "singcert/linalg.hpp"
#include "singcert/poly.hpp"

namespace singcert {

// A      = Df(x) + sum_i 1/2 D^2f(x)(v_i, v_i) v_i^H
// H      = Df(x) V1 V1^H            (H v_i = Df(x) v_i, H z = 0 on the complement)
// AmH    = A - H
// Inner product convention: <a,b> conjugate-linear in the second slot, so the
// Hermitian projector onto span{v} acts as z -> (v^H z) v.
struct CertOperators {
  CMatrix A;
  CMatrix H;
  CMatrix AmH;
  KernelFrame frame;
  std::vector<CVector> hes_vv;  // D^2 f(x)(v_i, v_i) per kernel vector
  double sigma_min_A = 0.0;
  double sigma_max_A = 0.0;
  double sigma_min_AmH = 0.0;
  double sigma_max_AmH = 0.0;
  double norm_H = 0.0;

  double inv_norm_A() const;    // SingularOperatorError when sigma_min_A = 0
  double inv_norm_AmH() const;  // SingularOperatorError when sigma_min_AmH = 0
};

CertOperators operator_A(const PolySystem& f, const CVector& x, const KernelFrame& frame);

// A_(alpha) = Df(x) + sum_i D^2f(x)(alpha_i v_i, v_i) v_i^H; alpha = (1/2,...,1/2)
// recovers A. Nonsingularity requires all alpha_i nonzero.
CMatrix operator_A_alpha(const PolySystem& f, const CVector& x, const KernelFrame& frame,
                         const CVector& alpha);

enum class WhichOperator { A, AmH };

struct GammaEntry {
  int k = 0;
  double bound = 0.0;  // certified upper bound of ||op^-1 D^k f(x)/k!||
  double root = 0.0;   // bound^(1/(k-1))
};

struct GammaBound {
  std::vector<GammaEntry> per_k;  // k = 2 .. maxdeg
  double gamma = 1.0;             // max(1, max_k root_k)
  WhichOperator operator_used = WhichOperator::A;
};

// Certified upper bound of the gamma parameter: per order k the operator inverse
// is applied to the output slot of D^k f(x)/k! and the mode-1 unfolding
// Frobenius norm taken (tensor spectral norm <= unfolding spectral norm <=
// unfolding Frobenius norm). Finite max since D^k f = 0 above the degree.
GammaBound gamma_bound(const PolySystem& f, const CVector& x, const CertOperators& ops,
                       WhichOperator which, double rank_tol = 1e-8);

enum class DVariant { paper, kappa2 };
const char* to_string(DVariant v);

struct UniversalConstant {
  int kappa = 0;
  double d = 0.0;
  double residual = 0.0;  // |h(d)| at the returned root
};

// Smallest positive root of
//   sqrt(1-d^2) - (kappa+1) kappa d sqrt(1-d^2) - kappa d^2 - d = 0
// (DVariant::kappa2 replaces kappa d^2 by kappa^2 d^2). Scan at 1e-3 for the
// first sign change, then bisect to 1e-14.
UniversalConstant universal_d(int kappa, DVariant variant = DVariant::paper);

struct CertifyConfig {
  double rank_tol = 1e-8;
  double res_tol = 1e-6;
  DVariant d_variant = DVariant::paper;
  std::optional<double> gamma_override;
};

struct SeparationResult {
  int kappa = 0;
  double gamma = 1.0;
  bool gamma_overridden = false;
  double d = 0.0;
  double radius = 0.0;  // d / (2 gamma^2)
};

// Separation bound at an exact simple multiple root: every other zero lies at
// distance at least d/(2 gamma^2). Propagates
// SingularOperatorError / NotSimple failures as exceptions.
SeparationResult separation_bound(const PolySystem& f, const CVector& x,
                                  std::uint64_t seed, const CertifyConfig& cfg = {});

struct ResidualBoundCheck {
  bool holds = false;
  double lhs = 0.0;  // ||f(y)||
  double rhs = 0.0;  // d ||y-x||^2 / (2 ||A^-1||)
};

// Residual lower bound predicate; RadiusError if ||y-x|| > d/(4 gamma^2).
ResidualBoundCheck residual_lower_bound_check(const PolySystem& f, const CVector& x,
                                              const CVector& y, const CertOperators& ops,
                                              double gamma, double d);

struct ClusterCriterionResult {
  bool certified = false;
  double d_r_bound = 0.0;   // upper bound of d_R(f, g)
  double threshold = 0.0;   // d R^2 / (2 ||A^-1||)
  double radius = 0.0;
  long long zero_count = 0;  // mu when supplied, else the 2^kappa floor
  bool mu_known = false;
  int kappa = 0;
  double gamma = 1.0;
};

// Cluster criterion: x an exact simple multiple root of f, g a nearby
// system, 0 < R <= d/(4 gamma^2). RadiusError when R is out of range.
ClusterCriterionResult cluster_criterion(const PolySystem& f, const PolySystem& g,
                                         const CVector& x, double radius,
                                         std::uint64_t seed, const CertifyConfig& cfg = {},
                                         std::optional<int> mu = std::nullopt);

enum class CertVerdict { Certified, NotCertified, PreconditionFailed };
const char* to_string(CertVerdict v);

struct CertReport {
  CertVerdict verdict = CertVerdict::PreconditionFailed;
  std::string reason;  // set when PreconditionFailed

  int kappa = 0;
  double residual = 0.0;  // ||f(x)||
  double gamma = 1.0;
  bool gamma_overridden = false;
  std::vector<GammaEntry> gamma_per_k;
  double d = 0.0;
  DVariant d_variant = DVariant::paper;
  double d_residual = 0.0;
  double radius_separation = 0.0;  // d / (2 gamma^2)
  double radius_cluster = 0.0;     // d / (4 gamma^2)
  double lhs = 0.0;                // ||f(x)|| + ||H|| d/(4 gamma^2)
  double rhs = 0.0;                // d^3 / (32 gamma^4 ||(A-H)^-1||)
  long long zero_count_lower_bound = 0;  // 2^kappa
  double norm_H = 0.0;
  double sigma_min_AmH = 0.0;

  // rank/image precondition margins.
  double precond_sigma = 0.0;  // sigma_{n-kappa}(Df(x) V2); +inf when kappa = n
  double precond_sigma_threshold = 0.0;
  std::vector<double> precond_ls_residuals;   // per kernel vector
  std::vector<double> precond_ls_thresholds;  // 1e-8 ||D^2f(v_i,v_i)||

  std::uint64_t seed = 0;
  double rank_tol = 0.0;
  double res_tol = 0.0;
};

// Certification pipeline at an approximately known root. All failures are encoded
// in the verdict; nothing is thrown.
CertReport certify_cluster(const PolySystem& f, const CVector& x, std::uint64_t seed,
                           const CertifyConfig& cfg = {});

struct InequalitySuiteReport {
  int samples = 0;
  int resampled = 0;  // draws rejected for min|alpha_i| ~ 0 (logged exclusions)

  int large_angle_checked = 0;
  int large_angle_failures = 0;
  double large_angle_worst_margin = 0.0;

  int min_alpha_checked = 0;
  int min_alpha_failures = 0;
  double min_alpha_worst_margin = 0.0;

  int branch_linear_checked = 0;
  int branch_linear_failures = 0;
  double branch_linear_worst_margin = 0.0;

  int branch_quadratic_checked = 0;
  int branch_quadratic_failures = 0;
  double branch_quadratic_worst_margin = 0.0;

  int pythagoras_failures = 0;
  double pythagoras_worst = 0.0;

  int rescale_draws = 0;
  int rescale_failures = 0;
  double rescale_worst_rel = 0.0;

  double gamma = 1.0;
  double theta = 0.0;
};

// Samples w with gamma ||w|| <= 1/2 at an exact simple multiple root and
// checks the large-angle, min-alpha, and two-branch lower bounds for
// ||A^-1 f(x+w)|| (certified gamma substituted; each conclusion weakens
// monotonically in gamma) plus the rescaled-operator norm identity.
InequalitySuiteReport inequality_suite(const PolySystem& f, const CVector& x, int samples,
                             std::uint64_t seed, const CertifyConfig& cfg = {},
                             int rescale_draws = 100);

}  // namespace singcert
