#pragma once

#include <vector>

#include "singcert/poly.hpp"

namespace singcert {

struct DualConfig {
  double rank_tol = 1e-8;
  double res_tol = 1e-6;
  int kmax = 12;
  long max_entries = 20'000'000;  // Macaulay blow-up guard (rows x cols)
};

// Local dual space invariants of an isolated zero: dims[k] = dim D^(k)_{f,x}.
struct DualInvariants {
  int breadth = 0;
  int depth = 0;
  int multiplicity = 1;
  std::vector<int> dims;  // k = 0 .. depth+1
  double residual = 0.0;  // ||f(x)||
  bool residual_ok = true;
};

// Nullity of the order-k Macaulay matrix: rows d^alpha_x((X-x)^beta f_i) with
// |alpha| <= k, |beta| <= k-1; equals dim D^(k)_{f,x}.
int macaulay_nullity(const PolySystem& f, const CVector& x, int k,
                     const DualConfig& cfg = {});

// Iterates macaulay_nullity until the dims plateau; NotStabilizedError if no
// plateau is reached by cfg.kmax.
DualInvariants dual_invariants(const PolySystem& f, const CVector& x,
                               const DualConfig& cfg = {});

}  // namespace singcert
