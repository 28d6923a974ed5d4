#include "singcert/dualspace.hpp"

#include <map>

#include "singcert/linalg.hpp"

namespace singcert {

namespace {

// Normalized derivative functionals d^gamma_x(f_i) = (d^gamma f_i)(x)/gamma!
// for all |gamma| <= k, shared by every Macaulay entry at order k.
std::map<Exponents, CVector> normalized_derivatives(const PolySystem& f, const CVector& x,
                                                    int k) {
  std::map<Exponents, CVector> out;
  for (const auto& gamma : multi_indices_upto(f.nvars, k)) {
    double norm = 1.0;
    for (int g : gamma) norm *= factorial(g);
    CVector vals(f.size());
    for (int i = 0; i < f.size(); ++i) {
      Polynomial p = f.polys[i];
      for (int j = 0; j < f.nvars; ++j)
        for (int a = 0; a < gamma[j]; ++a) p = p.differentiated(j);
      vals(i) = p.evaluate(x) / norm;
    }
    out.emplace(gamma, vals);
  }
  return out;
}

bool leq(const Exponents& a, const Exponents& b) {
  for (size_t j = 0; j < a.size(); ++j)
    if (a[j] > b[j]) return false;
  return true;
}

}  // namespace

int macaulay_nullity(const PolySystem& f, const CVector& x, int k, const DualConfig& cfg) {
  if (k < 0) throw DimensionError("macaulay_nullity requires k >= 0");
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  const int n = f.nvars;
  auto cols = multi_indices_upto(n, k);
  auto betas = k >= 1 ? multi_indices_upto(n, k - 1) : std::vector<Exponents>{};
  long rows = static_cast<long>(betas.size()) * f.size();
  if (rows * static_cast<long>(cols.size()) > cfg.max_entries)
    throw MacaulaySizeError("Macaulay matrix would exceed the configured size cap (" +
                            std::to_string(rows) + " x " + std::to_string(cols.size()) + ")");
  if (rows == 0) return static_cast<int>(cols.size());

  auto der = normalized_derivatives(f, x, k);
  // Leibniz with normalized functionals: d^alpha_x((X-x)^beta f_i) =
  // d^(alpha-beta)_x(f_i) when beta <= alpha, else 0.
  CMatrix M(rows, cols.size());
  long r = 0;
  for (const auto& beta : betas) {
    for (int i = 0; i < f.size(); ++i, ++r) {
      for (size_t c = 0; c < cols.size(); ++c) {
        const Exponents& alpha = cols[c];
        if (!leq(beta, alpha)) {
          M(r, c) = Complex(0.0, 0.0);
          continue;
        }
        Exponents g(n);
        for (int j = 0; j < n; ++j) g[j] = alpha[j] - beta[j];
        M(r, c) = der.at(g)(i);
      }
    }
  }
  return numerical_nullity(M, cfg.rank_tol);
}

DualInvariants dual_invariants(const PolySystem& f, const CVector& x, const DualConfig& cfg) {
  if (cfg.kmax < 1) throw DimensionError("dual_invariants requires kmax >= 1");
  DualInvariants inv;
  inv.residual = evaluate(f, x).norm();
  inv.residual_ok = inv.residual <= cfg.res_tol;
  inv.dims = {1};
  for (int k = 1; k <= cfg.kmax; ++k) {
    inv.dims.push_back(macaulay_nullity(f, x, k, cfg));
    if (inv.dims[k] == inv.dims[k - 1]) {
      inv.depth = k - 1;
      inv.multiplicity = inv.dims[k - 1];
      inv.breadth = inv.dims[1] - inv.dims[0];
      return inv;
    }
  }
  throw NotStabilizedError("dual space dimensions did not stabilize by kmax = " +
                           std::to_string(cfg.kmax) +
                           " (zero may be non-isolated or kmax too small)");
}

}  // namespace singcert
