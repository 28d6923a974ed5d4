#pragma once

#include <cstdint>
#include <vector>

#include "singcert/linalg.hpp"
#include "singcert/poly.hpp"

namespace singcert {

// B = [Hes(v_1,v_1) ... Hes(v_kappa,v_kappa)  Jac V2], the square matrix whose
// full rank characterizes one-step deflation termination.
struct CharacterizationMatrix {
  CMatrix B;
  KernelFrame frame;
  double det_abs = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool full_rank = false;
};

CharacterizationMatrix build_characterization_matrix(const PolySystem& f,
                                                     const CVector& x,
                                                     const KernelFrame& frame,
                                                     double rank_tol = 1e-8);

// One LVZ-style deflation step with the [V1 V2] parametrization: the augmented
// system g(x, lambda2) = [f; Df (V1 lambda1 + V2 lambda2)] and its Jacobian at
// (x, 0), a 2n x (2n - kappa) block matrix.
struct DeflationStep {
  PolySystem g;  // 2n - kappa variables: x-block then lambda2-block
  CVector lambda1;
  CMatrix V;  // [V1 V2]
  CMatrix Dg;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool full_rank = false;
};

DeflationStep deflate_once(const PolySystem& f, const CVector& x,
                           const KernelFrame& frame, const CVector& lambda1,
                           double rank_tol = 1e-8);
DeflationStep deflate_once(const PolySystem& f, const CVector& x,
                           const KernelFrame& frame, std::uint64_t seed,
                           double rank_tol = 1e-8);

struct EquivalenceTrial {
  bool b_full = false;
  bool dg_full = false;
  double b_rel_sigma = 0.0;   // sigma_min/sigma_max of B
  double dg_rel_sigma = 0.0;  // sigma_min/sigma_max of Dg
};

struct EquivalenceReport {
  int trials = 0;
  int agreements = 0;
  int both_full = 0;
  int borderline = 0;  // either matrix within 10x of the rank tolerance
  bool vacuous = false;  // kappa = 0
  std::vector<EquivalenceTrial> detail;
};

// The one-step characterization equivalence as a randomized experiment: over
// seeded frames and
// lambda1 draws, record whether B and Dg agree on full rank.
EquivalenceReport one_step_equivalence_check(const PolySystem& f, const CVector& x,
                                             int trials, std::uint64_t seed,
                                             double rank_tol = 1e-8);

enum class RootClass { Regular, SimpleMultiple, NotSimple, NotARoot };
const char* to_string(RootClass c);

struct RootClassification {
  RootClass verdict = RootClass::Regular;
  double residual = 0.0;
  int kappa = 0;
  double sigma_min_A = 0.0;
  double sigma_max_A = 0.0;
  KernelFrame frame;  // the seeded random frame used for the verdict
};

// Definition-1 classification at a point: NotARoot if the residual exceeds
// res_tol, Regular if kappa = 0, else SimpleMultiple iff the operator A for a
// seeded random kernel basis is numerically nonsingular. Isolation is an
// unverified assumption.
RootClassification is_simple_multiple(const PolySystem& f, const CVector& x,
                                      std::uint64_t seed, double rank_tol = 1e-8,
                                      double res_tol = 1e-6);

}  // namespace singcert
