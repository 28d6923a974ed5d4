#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "singcert/types.hpp"

namespace singcert {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Exponents = std::vector<int>;

// Sparse multivariate polynomial with complex coefficients. Terms are kept in
// a lexicographically ordered map keyed by the exponent vector; coefficients
// that cancel to exactly zero are erased, so the representation is canonical
// and iteration order is deterministic.
class Polynomial {
 public:
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  const std::map<Exponents, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // max total degree; 0 for the zero polynomial

  void add_term(const Exponents& expo, Complex coeff);

  Complex evaluate(const CVector& x) const;
  Polynomial differentiated(int var) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(Complex s) const;

  std::string to_string(const std::vector<std::string>& names) const;

  bool operator==(const Polynomial& other) const {
    return nvars_ == other.nvars_ && terms_ == other.terms_;
  }

 private:
  int nvars_;
  std::map<Exponents, Complex> terms_;
};

struct PolySystem {
  int nvars = 0;
  std::vector<Polynomial> polys;
  std::vector<std::string> var_names;  // synthesized as x1..xn when absent

  int size() const { return static_cast<int>(polys.size()); }
  int max_degree() const;
  std::string to_string() const;
  bool operator==(const PolySystem& other) const {
    return nvars == other.nvars && polys == other.polys;
  }
};

// Text grammar: `vars <id>(,<id>)*;` header, then `;`-separated expressions
// over + - * ^ ( ) with decimal literals (`i` suffix for imaginary parts).
PolySystem parse_system(const std::string& text);

CVector evaluate(const PolySystem& f, const CVector& x);
CMatrix jacobian(const PolySystem& f, const CVector& x);

// Multi-index enumeration, ordered by total degree then lexicographically.
std::vector<Exponents> multi_indices_exact(int nvars, int total);
std::vector<Exponents> multi_indices_upto(int nvars, int total);

// Order-k derivative tensor of a system at a point, stored once per
// multi-index alpha (|alpha| = k) as the raw partial derivatives
// (d^alpha f_i)(x); the symmetric expansion multiplicity k!/alpha! is applied
// at application time.
class DerivTensor {
 public:
  DerivTensor(int order, int nvars, int nout);

  int order() const { return order_; }
  int nvars() const { return nvars_; }
  int nout() const { return nout_; }

  const CVector& raw(const Exponents& alpha) const;
  void set_raw(const Exponents& alpha, const CVector& value);
  const std::map<Exponents, CVector>& entries() const { return raw_; }

  // Full multilinear application T(u_1, ..., u_k).
  CVector apply(const std::vector<CVector>& vectors) const;
  // T(w, ..., w) via the multinomial formula sum_alpha (k!/alpha!) d^alpha f w^alpha.
  CVector apply_same(const CVector& w) const;
  // Frobenius norm of the mode-1 unfolding of the fully expanded tensor.
  double unfolding_frobenius() const;

  bool is_zero(double tol = 0.0) const;

 private:
  int order_;
  int nvars_;
  int nout_;
  std::map<Exponents, CVector> raw_;
};

DerivTensor derivative_tensor(const PolySystem& f, const CVector& x, int k);

// D^2 f(x)(a, b) without materializing the full tensor.
CVector hessian_apply(const PolySystem& f, const CVector& x, const CVector& a,
                      const CVector& b);

// g(y) = f(y) - c - H (y - x); with c = f(x) this is the shift used by the
// approximate-root certification:
// Dg(x) = Df(x) - H while all higher derivatives at x are untouched.
PolySystem shift_system(const PolySystem& f, const CVector& x, const CVector& c,
                        const CMatrix& H);

PolySystem subtract(const PolySystem& f, const PolySystem& g);

// Upper bound of max_{||y-x|| <= R} ||f(y)||: sum over k of the unfolding
// Frobenius bound of D^k f(x)/k! times R^k.
double taylor_norm_bound(const PolySystem& f, const CVector& x, double radius);

double factorial(int k);
double multinomial(int k, const Exponents& alpha);  // k!/alpha!

}  // namespace singcert
