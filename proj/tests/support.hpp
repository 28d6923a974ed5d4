#pragma once

#include <string>
#include <vector>

#include "singcert/commands.hpp"
#include "singcert/rng.hpp"

namespace singcert::test {

inline std::string corpus_file(const std::string& c, const std::string& f) {
  return std::string(SINGCERT_CORPUS_DIR) + "/" + c + "/" + f;
}

struct Case {
  PolySystem f;
  CVector x;
};

inline Case load_case(const std::string& name) {
  return {load_system(corpus_file(name, "system.txt")),
          load_point(corpus_file(name, "point.json"))};
}

inline const std::vector<std::string>& simple_multiple_cases() {
  static const std::vector<std::string> names = {
      "cyclic_cubes", "cyclic_quartics", "shifted_cubes",
      "sin_cubes_trunc", "two_squares", "simple_double"};
  return names;
}

inline const std::vector<std::string>& all_cases() {
  static const std::vector<std::string> names = {
      "cyclic_cubes", "cyclic_quartics", "shifted_cubes", "sin_cubes_trunc",
      "two_squares",  "simple_double",   "cusp_line",     "regular_pt"};
  return names;
}

// Dense random system: every monomial of total degree <= maxdeg gets a
// complex Gaussian coefficient.
inline PolySystem random_system(int n, int maxdeg, Rng& rng) {
  PolySystem s;
  s.nvars = n;
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    for (const auto& e : multi_indices_upto(n, maxdeg)) p.add_term(e, rng.cgaussian());
    s.polys.push_back(p);
  }
  return s;
}

// Random system with a constructed singular zero at the origin: f(0) = 0 and
// Df(0) = M V2^H for a random unitary [V1 V2], so ker Df(0) = im V1.
inline PolySystem random_singular_system(int n, int kappa, int maxdeg, Rng& rng) {
  Eigen::MatrixXcd U = random_unitary(n, rng);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  if (kappa < n) {
    Eigen::MatrixXcd V2 = U.rightCols(n - kappa);
    L = rng.gaussian_matrix(n, n - kappa) * V2.adjoint();
  }
  PolySystem s;
  s.nvars = n;
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    for (int j = 0; j < n; ++j) {
      Exponents e(n, 0);
      e[j] = 1;
      p.add_term(e, L(i, j));
    }
    for (int d = 2; d <= maxdeg; ++d)
      for (const auto& e : multi_indices_exact(n, d)) p.add_term(e, rng.cgaussian());
    s.polys.push_back(p);
  }
  return s;
}

// Substitutes x_i -> sum_j U(i,j) y_j, i.e. returns f(U y).
inline PolySystem linear_substitute(const PolySystem& f, const CMatrix& U) {
  std::vector<Polynomial> images;
  for (int i = 0; i < f.nvars; ++i) {
    Polynomial li(f.nvars);
    for (int j = 0; j < f.nvars; ++j) {
      Exponents e(f.nvars, 0);
      e[j] = 1;
      li.add_term(e, U(i, j));
    }
    images.push_back(li);
  }
  PolySystem g;
  g.nvars = f.nvars;
  for (const auto& p : f.polys) {
    Polynomial q(f.nvars);
    for (const auto& [e, c] : p.terms()) {
      Polynomial t(f.nvars);
      t.add_term(Exponents(f.nvars, 0), c);
      for (int j = 0; j < f.nvars; ++j)
        for (int a = 0; a < e[j]; ++a) t = t * images[j];
      q += t;
    }
    g.polys.push_back(q);
  }
  return g;
}

inline KernelFrame explicit_frame(const CMatrix& V1, const CMatrix& V2) {
  KernelFrame fr;
  fr.kappa = static_cast<int>(V1.cols());
  fr.V1 = V1;
  fr.V2 = V2;
  fr.sigma = Eigen::VectorXd::Zero(V1.rows());
  fr.tol_used = 0.0;
  return fr;
}

}  // namespace singcert::test
