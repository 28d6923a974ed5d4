#include "singcert/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace singcert {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double multinomial(int k, const Exponents& alpha) {
  double r = factorial(k);
  for (int a : alpha) r /= factorial(a);
  return r;
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

void Polynomial::add_term(const Exponents& expo, Complex coeff) {
  if (static_cast<int>(expo.size()) != nvars_)
    throw DimensionError("exponent vector length does not match nvars");
  if (coeff == Complex(0.0, 0.0)) return;
  auto it = terms_.find(expo);
  if (it == terms_.end()) {
    terms_.emplace(expo, coeff);
  } else {
    it->second += coeff;
    if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int a : e) d += a;
    deg = std::max(deg, d);
  }
  return deg;
}

Complex Polynomial::evaluate(const CVector& x) const {
  if (x.size() != nvars_) throw DimensionError("point dimension does not match nvars");
  Complex sum(0.0, 0.0);
  for (const auto& [e, c] : terms_) {  // lexicographic, deterministic
    Complex t = c;
    for (int j = 0; j < nvars_; ++j)
      for (int p = 0; p < e[j]; ++p) t *= x(j);
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::differentiated(int var) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents e2 = e;
    e2[var] -= 1;
    r.add_term(e2, c * static_cast<double>(e[var]));
  }
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.nvars_ != nvars_) throw DimensionError("nvars mismatch in +");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.nvars_ != nvars_) throw DimensionError("nvars mismatch in -");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r = *this;
  r += other;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial r = *this;
  r -= other;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.nvars_ != nvars_) throw DimensionError("nvars mismatch in *");
  Polynomial r(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      Exponents e(nvars_);
      for (int j = 0; j < nvars_; ++j) e[j] = ea[j] + eb[j];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::scaled(Complex s) const {
  Polynomial r(nvars_);
  if (s == Complex(0.0, 0.0)) return r;
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Coefficient in re-parseable form; `negated` strips a leading minus that the
// caller renders as " - ".
std::string format_coeff(Complex c, bool negated) {
  if (negated) c = -c;
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return format_double(c.imag()) + "i";
  std::string s = "(" + format_double(c.real());
  if (c.imag() >= 0.0) s += "+";
  s += format_double(c.imag()) + "i)";
  return s;
}

bool coeff_prints_negative(Complex c) {
  if (c.imag() == 0.0) return c.real() < 0.0;
  if (c.real() == 0.0) return c.imag() < 0.0;
  return false;  // complex pairs stay parenthesized
}

}  // namespace

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    bool neg = coeff_prints_negative(c);
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    out += format_coeff(c, neg);
    for (int j = 0; j < nvars_; ++j) {
      if (e[j] == 0) continue;
      out += "*" + names[j];
      if (e[j] > 1) out += "^" + std::to_string(e[j]);
    }
  }
  return out;
}

int PolySystem::max_degree() const {
  int deg = 0;
  for (const auto& p : polys) deg = std::max(deg, p.degree());
  return deg;
}

std::string PolySystem::to_string() const {
  std::vector<std::string> names = var_names;
  if (static_cast<int>(names.size()) != nvars) {
    names.clear();
    for (int j = 0; j < nvars; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  std::string out = "vars ";
  for (int j = 0; j < nvars; ++j) {
    if (j) out += ",";
    out += names[j];
  }
  out += ";\n";
  for (size_t i = 0; i < polys.size(); ++i) {
    out += polys[i].to_string(names);
    out += i + 1 < polys.size() ? ";\n" : "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

constexpr long kMaxExponent = 10'000;

struct Token {
  enum Kind { Ident, Number, Plus, Minus, Star, Caret, LParen, RParen, Semi, Comma, End };
  Kind kind = End;
  std::string text;
  double value = 0.0;
  bool imaginary = false;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) bump();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': tok_.kind = Token::Plus; bump(); return;
      case '-': tok_.kind = Token::Minus; bump(); return;
      case '*': tok_.kind = Token::Star; bump(); return;
      case '^': tok_.kind = Token::Caret; bump(); return;
      case '(': tok_.kind = Token::LParen; bump(); return;
      case ')': tok_.kind = Token::RParen; bump(); return;
      case ';': tok_.kind = Token::Semi; bump(); return;
      case ',': tok_.kind = Token::Comma; bump(); return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        id += text_[pos_];
        bump();
      }
      tok_.kind = Token::Ident;
      tok_.text = id;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void lex_number() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      bump();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t mark = pos_;
      int mark_line = line_, mark_col = col_;
      bump();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) bump();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) bump();
      } else {  // not an exponent after all (e.g. an identifier follows)
        pos_ = mark;
        line_ = mark_line;
        col_ = mark_col;
      }
    }
    std::string num = text_.substr(start, pos_ - start);
    if (num == ".") throw ParseError("malformed number", tok_.line, tok_.col);
    tok_.kind = Token::Number;
    tok_.value = std::strtod(num.c_str(), nullptr);
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() ||
         !(std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_'))) {
      tok_.imaginary = true;
      bump();
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  PolySystem parse() {
    Token head = expect(Token::Ident, "expected 'vars' header");
    if (head.text != "vars") throw ParseError("expected 'vars' header", head.line, head.col);
    PolySystem sys;
    for (;;) {
      Token id = expect(Token::Ident, "expected variable name");
      if (var_index_.count(id.text))
        throw ParseError("duplicate variable '" + id.text + "'", id.line, id.col);
      var_index_[id.text] = static_cast<int>(sys.var_names.size());
      sys.var_names.push_back(id.text);
      if (lex_.peek().kind == Token::Comma) {
        lex_.next();
        continue;
      }
      break;
    }
    expect(Token::Semi, "expected ';' after variable list");
    nvars_ = static_cast<int>(sys.var_names.size());
    sys.nvars = nvars_;
    for (;;) {
      sys.polys.push_back(parse_expr());
      if (lex_.peek().kind == Token::Semi) {
        lex_.next();
        if (lex_.peek().kind == Token::End) break;  // trailing ';'
        continue;
      }
      if (lex_.peek().kind == Token::End) break;
      throw ParseError("expected ';' or end of input", lex_.peek().line, lex_.peek().col);
    }
    return sys;
  }

 private:
  Token expect(Token::Kind kind, const std::string& msg) {
    if (lex_.peek().kind != kind) throw ParseError(msg, lex_.peek().line, lex_.peek().col);
    return lex_.next();
  }

  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    for (;;) {
      Token::Kind k = lex_.peek().kind;
      if (k == Token::Plus) {
        lex_.next();
        acc += parse_term();
      } else if (k == Token::Minus) {
        lex_.next();
        acc -= parse_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_unary();
    while (lex_.peek().kind == Token::Star) {
      lex_.next();
      acc = acc * parse_unary();
    }
    return acc;
  }

  Polynomial parse_unary() {
    if (lex_.peek().kind == Token::Minus) {
      lex_.next();
      return parse_unary().scaled(Complex(-1.0, 0.0));
    }
    if (lex_.peek().kind == Token::Plus) {
      lex_.next();
      return parse_unary();
    }
    return parse_power();
  }

  Polynomial parse_power() {
    Polynomial base = parse_atom();
    if (lex_.peek().kind != Token::Caret) return base;
    Token caret = lex_.next();
    Token e = expect(Token::Number, "expected integer exponent after '^'");
    if (e.imaginary || e.value != std::floor(e.value) || e.value < 0.0)
      throw ParseError("exponent must be a non-negative integer", e.line, e.col);
    if (e.value > static_cast<double>(kMaxExponent))
      throw ParseError("exponent overflow", e.line, e.col);
    long n = static_cast<long>(e.value);
    if (lex_.peek().kind == Token::Caret)
      throw ParseError("chained '^' is not allowed", lex_.peek().line, lex_.peek().col);
    Polynomial acc(nvars_);
    acc.add_term(Exponents(nvars_, 0), Complex(1.0, 0.0));
    Polynomial sq = base;  // square-and-multiply
    while (n > 0) {
      if (n & 1) acc = acc * sq;
      n >>= 1;
      if (n) sq = sq * sq;
      if (acc.degree() > kMaxExponent || sq.degree() > kMaxExponent)
        throw ParseError("exponent overflow", caret.line, caret.col);
    }
    return acc;
  }

  Polynomial parse_atom() {
    Token t = lex_.peek();
    if (t.kind == Token::Number) {
      lex_.next();
      Polynomial p(nvars_);
      p.add_term(Exponents(nvars_, 0),
                 t.imaginary ? Complex(0.0, t.value) : Complex(t.value, 0.0));
      return p;
    }
    if (t.kind == Token::Ident) {
      lex_.next();
      auto it = var_index_.find(t.text);
      if (it == var_index_.end()) {
        if (t.text == "i") {  // imaginary unit unless declared as a variable
          Polynomial p(nvars_);
          p.add_term(Exponents(nvars_, 0), Complex(0.0, 1.0));
          return p;
        }
        throw ParseError("undeclared variable '" + t.text + "'", t.line, t.col);
      }
      Polynomial p(nvars_);
      Exponents e(nvars_, 0);
      e[it->second] = 1;
      p.add_term(e, Complex(1.0, 0.0));
      return p;
    }
    if (t.kind == Token::LParen) {
      lex_.next();
      Polynomial p = parse_expr();
      expect(Token::RParen, "expected ')'");
      return p;
    }
    throw ParseError("expected number, variable, or '('", t.line, t.col);
  }

  Lexer lex_;
  std::map<std::string, int> var_index_;
  int nvars_ = 0;
};

}  // namespace

PolySystem parse_system(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Evaluation and derivatives
// ---------------------------------------------------------------------------

CVector evaluate(const PolySystem& f, const CVector& x) {
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CVector r(f.size());
  for (int i = 0; i < f.size(); ++i) r(i) = f.polys[i].evaluate(x);
  return r;
}

CMatrix jacobian(const PolySystem& f, const CVector& x) {
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  CMatrix J(f.size(), f.nvars);
  for (int i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.nvars; ++j) J(i, j) = f.polys[i].differentiated(j).evaluate(x);
  return J;
}

namespace {

void enumerate_exact(int nvars, int total, int pos, Exponents& cur,
                     std::vector<Exponents>& out) {
  if (pos == nvars - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int a = total; a >= 0; --a) {  // lexicographically descending head = stable order
    cur[pos] = a;
    enumerate_exact(nvars, total - a, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<Exponents> multi_indices_exact(int nvars, int total) {
  std::vector<Exponents> out;
  if (nvars == 0) return out;
  Exponents cur(nvars, 0);
  enumerate_exact(nvars, total, 0, cur, out);
  return out;
}

std::vector<Exponents> multi_indices_upto(int nvars, int total) {
  std::vector<Exponents> out;
  for (int d = 0; d <= total; ++d) {
    auto level = multi_indices_exact(nvars, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

DerivTensor::DerivTensor(int order, int nvars, int nout)
    : order_(order), nvars_(nvars), nout_(nout) {}

const CVector& DerivTensor::raw(const Exponents& alpha) const {
  auto it = raw_.find(alpha);
  if (it == raw_.end()) throw DimensionError("multi-index not present in tensor");
  return it->second;
}

void DerivTensor::set_raw(const Exponents& alpha, const CVector& value) {
  raw_[alpha] = value;
}

CVector DerivTensor::apply(const std::vector<CVector>& vectors) const {
  if (static_cast<int>(vectors.size()) != order_)
    throw DimensionError("tensor application arity mismatch");
  for (const auto& v : vectors)
    if (v.size() != nvars_) throw DimensionError("tensor application vector length mismatch");
  CVector acc = CVector::Zero(nout_);
  // Sum over ordered index tuples (j_1..j_k); the raw entry depends only on
  // the multiset of indices.
  std::vector<int> idx(order_, 0);
  Exponents alpha(nvars_, 0);
  for (;;) {
    std::fill(alpha.begin(), alpha.end(), 0);
    Complex prod(1.0, 0.0);
    for (int s = 0; s < order_; ++s) {
      alpha[idx[s]] += 1;
      prod *= vectors[s](idx[s]);
    }
    acc += prod * raw(alpha);
    int s = order_ - 1;
    while (s >= 0) {
      if (++idx[s] < nvars_) break;
      idx[s] = 0;
      --s;
    }
    if (s < 0) break;
  }
  return acc;
}

CVector DerivTensor::apply_same(const CVector& w) const {
  if (w.size() != nvars_) throw DimensionError("tensor application vector length mismatch");
  CVector acc = CVector::Zero(nout_);
  for (const auto& [alpha, vals] : raw_) {
    Complex mono(1.0, 0.0);
    for (int j = 0; j < nvars_; ++j)
      for (int p = 0; p < alpha[j]; ++p) mono *= w(j);
    acc += multinomial(order_, alpha) * mono * vals;
  }
  return acc;
}

double DerivTensor::unfolding_frobenius() const {
  double sum = 0.0;
  for (const auto& [alpha, vals] : raw_) sum += multinomial(order_, alpha) * vals.squaredNorm();
  return std::sqrt(sum);
}

bool DerivTensor::is_zero(double tol) const {
  for (const auto& [alpha, vals] : raw_)
    for (int i = 0; i < vals.size(); ++i)
      if (std::abs(vals(i)) > tol) return false;
  return true;
}

DerivTensor derivative_tensor(const PolySystem& f, const CVector& x, int k) {
  if (x.size() != f.nvars) throw DimensionError("point dimension does not match system");
  if (k < 1) throw DimensionError("derivative order must be >= 1");
  DerivTensor t(k, f.nvars, f.size());
  for (const auto& alpha : multi_indices_exact(f.nvars, k)) {
    CVector vals(f.size());
    for (int i = 0; i < f.size(); ++i) {
      Polynomial p = f.polys[i];
      for (int j = 0; j < f.nvars; ++j)
        for (int a = 0; a < alpha[j]; ++a) p = p.differentiated(j);
      vals(i) = p.evaluate(x);
    }
    t.set_raw(alpha, vals);
  }
  return t;
}

CVector hessian_apply(const PolySystem& f, const CVector& x, const CVector& a,
                      const CVector& b) {
  DerivTensor t = derivative_tensor(f, x, 2);
  return t.apply({a, b});
}

PolySystem shift_system(const PolySystem& f, const CVector& x, const CVector& c,
                        const CMatrix& H) {
  if (x.size() != f.nvars || c.size() != f.size())
    throw DimensionError("shift_system dimension mismatch");
  if (H.rows() != f.size() || H.cols() != f.nvars)
    throw DimensionError("shift_system matrix dimension mismatch");
  PolySystem g = f;
  for (int i = 0; i < f.size(); ++i) {
    Polynomial& p = g.polys[i];
    Complex constant = -c(i);
    for (int j = 0; j < f.nvars; ++j) {
      // -H_ij (X_j - x_j)
      Exponents e(f.nvars, 0);
      e[j] = 1;
      p.add_term(e, -H(i, j));
      constant += H(i, j) * x(j);
    }
    p.add_term(Exponents(f.nvars, 0), constant);
  }
  return g;
}

PolySystem subtract(const PolySystem& f, const PolySystem& g) {
  if (f.nvars != g.nvars || f.size() != g.size())
    throw DimensionError("system subtraction dimension mismatch");
  PolySystem r = f;
  for (int i = 0; i < f.size(); ++i) r.polys[i] -= g.polys[i];
  return r;
}

double taylor_norm_bound(const PolySystem& f, const CVector& x, double radius) {
  if (radius <= 0.0) throw RadiusError("taylor_norm_bound requires a positive radius");
  double bound = evaluate(f, x).norm();  // k = 0
  int maxdeg = f.max_degree();
  double rk = 1.0;
  for (int k = 1; k <= maxdeg; ++k) {
    rk *= radius;
    DerivTensor t = derivative_tensor(f, x, k);
    bound += t.unfolding_frobenius() / factorial(k) * rk;
  }
  return bound;
}

}  // namespace singcert
