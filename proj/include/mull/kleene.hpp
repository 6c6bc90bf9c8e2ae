// Copyright 2026 The mull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Polynomial maps on R∞^n and the Kleene fixpoint operator.
//
// Expression files:
//
//   vars x y
//   x = 1/4 + 3/4 * x^2
//   y = x/2 + y/2

#ifndef MULL_KLEENE_HPP
#define MULL_KLEENE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mull/error.hpp"
#include "mull/semiring.hpp"

namespace mull {

/// A monotone expression: non-negative constants, variables, +, ·, division
/// by a positive constant and natural powers.
class Expr {
 public:
  enum class Op { Const, Var, Add, Mul, Div, Pow };

  static Expr constant(Rational c) { return Expr(Op::Const, std::move(c), 0, {}); }
  static Expr var(std::size_t i) { return Expr(Op::Var, 0, i, {}); }
  static Expr add(Expr a, Expr b) { return Expr(Op::Add, 0, 0, {std::move(a), std::move(b)}); }
  static Expr mul(Expr a, Expr b) { return Expr(Op::Mul, 0, 0, {std::move(a), std::move(b)}); }
  static Expr div(Expr a, Rational c) {
    if (c <= 0) throw InputError("division by a non-positive constant");
    return Expr(Op::Div, std::move(c), 0, {std::move(a)});
  }
  static Expr pow(Expr a, std::size_t n) { return Expr(Op::Pow, 0, n, {std::move(a)}); }

  Op op() const { return node_->op; }
  const Rational& value() const { return node_->value; }
  std::size_t index() const { return node_->index; }
  const Expr& arg(std::size_t i) const { return node_->args[i]; }

  bool has_vars() const {
    if (op() == Op::Var) return true;
    for (const auto& a : node_->args)
      if (a.has_vars()) return true;
    return false;
  }

  template <class Num>
  Num eval(const std::vector<Num>& x) const {
    switch (op()) {
      case Op::Const: return from_rational<Num>(value());
      case Op::Var: return x.at(index());
      case Op::Add: return arg(0).eval(x) + arg(1).eval(x);
      case Op::Mul: {
        Num a = arg(0).eval(x);
        if (a == Num(0)) return Num(0);
        Num b = arg(1).eval(x);
        if (b == Num(0)) return Num(0);
        return a * b;
      }
      case Op::Div: return arg(0).eval(x) / from_rational<Num>(value());
      case Op::Pow: {
        Num base = arg(0).eval(x), r(1);
        for (std::size_t i = 0; i < index(); ++i) r = r * base;
        return r;
      }
    }
    return Num(0);
  }

  /// Replaces variable i by subst[i].
  Expr substitute(const std::vector<Expr>& subst) const {
    switch (op()) {
      case Op::Const: return *this;
      case Op::Var: return subst.at(index());
      case Op::Add: return add(arg(0).substitute(subst), arg(1).substitute(subst));
      case Op::Mul: return mul(arg(0).substitute(subst), arg(1).substitute(subst));
      case Op::Div: return div(arg(0).substitute(subst), value());
      case Op::Pow: return pow(arg(0).substitute(subst), index());
    }
    return *this;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    switch (op()) {
      case Op::Const: return rational_to_string(value());
      case Op::Var: return names.at(index());
      case Op::Add: return "(" + arg(0).to_string(names) + " + " + arg(1).to_string(names) + ")";
      case Op::Mul: return arg(0).to_string(names) + " * " + arg(1).to_string(names);
      case Op::Div: return arg(0).to_string(names) + " / " + rational_to_string(value());
      case Op::Pow: return arg(0).to_string(names) + "^" + std::to_string(index());
    }
    return "?";
  }

 private:
  struct Node {
    Op op;
    Rational value;
    std::size_t index;
    std::vector<Expr> args;
  };

  template <class Num>
  static Num from_rational(const Rational& r) {
    if constexpr (std::is_same_v<Num, double>) return to_double(r);
    else return Num(r);
  }

  Expr(Op op, Rational v, std::size_t i, std::vector<Expr> args)
      : node_(std::make_shared<const Node>(Node{op, std::move(v), i, std::move(args)})) {}

  std::shared_ptr<const Node> node_;
};

/// A map R∞^inputs → R∞^outputs given by one expression per output.
class FunExpr {
 public:
  FunExpr(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Expr> components)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)), components_(std::move(components)) {
    if (outputs_.size() != components_.size()) throw InputError("one expression per output is required");
  }

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  const std::vector<Expr>& components() const { return components_; }
  bool is_endomap() const { return inputs_ == outputs_; }

  template <class Num>
  std::vector<Num> operator()(const std::vector<Num>& x) const {
    if (x.size() != inputs_.size()) throw IndexMismatch("FunExpr applied to a vector of the wrong dimension");
    std::vector<Num> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.eval(x));
    return out;
  }

  std::string to_string() const {
    std::string s = "vars";
    for (const auto& v : inputs_) s += " " + v;
    for (std::size_t i = 0; i < outputs_.size(); ++i) s += "\n" + outputs_[i] + " = " + components_[i].to_string(inputs_);
    return s + "\n";
  }

 private:
  std::vector<std::string> inputs_, outputs_;
  std::vector<Expr> components_;
};

/// f∘g.
inline FunExpr compose(const FunExpr& f, const FunExpr& g) {
  if (g.outputs().size() != f.inputs().size()) throw IndexMismatch("compose: dimensions do not match");
  std::vector<Expr> comps;
  for (const auto& c : f.components()) comps.push_back(c.substitute(g.components()));
  return FunExpr(g.inputs(), f.outputs(), std::move(comps));
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class ExprParser {
 public:
  ExprParser(const std::string& src, const std::vector<std::string>& vars, int line, std::size_t offset = 0)
      : src_(src), vars_(vars), line_(line), offset_(offset) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("expression line " + std::to_string(line_) + ", column " + std::to_string(offset_ + pos_ + 1) +
                     ": " + msg);
  }
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    while (eat('+')) e = Expr::add(e, product());
    return e;
  }
  Expr product() {
    Expr e = power();
    for (;;) {
      if (eat('*')) {
        e = Expr::mul(e, power());
      } else if (eat('/')) {
        std::size_t at = pos_;
        Expr d = power();
        if (d.has_vars()) {
          pos_ = at;
          fail("divisor must be constant");
        }
        Rational v = d.eval(std::vector<Rational>{});
        if (v <= 0) {
          pos_ = at;
          fail("divisor must be positive");
        }
        e = Expr::div(e, v);
      } else {
        return e;
      }
    }
  }
  Expr power() {
    Expr e = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a natural exponent");
      unsigned long n = std::stoul(src_.substr(start, pos_ - start));
      if (n > 64) fail("exponent too large");
      e = Expr::pow(e, n);
    }
    return e;
  }
  Expr atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == '-') fail("negative constants and subtraction are not monotone");
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      try {
        return Expr::constant(parse_rational(src_.substr(start, pos_ - start)));
      } catch (const InputError&) {
        pos_ = start;
        fail("malformed number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      std::string name = src_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Expr::var(i);
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& src_;
  const std::vector<std::string>& vars_;
  int line_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(const std::string& text, const std::vector<std::string>& vars) {
  return detail::ExprParser(text, vars, 1).parse();
}

/// Parses an expression file. Outputs are listed in file order; when every
/// input has exactly one equation they follow the order of `vars`.
inline FunExpr parse_funexpr(const std::string& text) {
  std::vector<std::string> vars;
  bool have_vars = false;
  std::vector<std::pair<std::string, Expr>> eqs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    std::string where = "expression line " + std::to_string(lineno) + ": ";
    if (first == "vars") {
      if (have_vars) throw InputError(where + "duplicate vars line");
      have_vars = true;
      for (std::string v; ls >> v;) {
        if (std::find(vars.begin(), vars.end(), v) != vars.end()) throw InputError(where + "duplicate variable " + v);
        vars.push_back(v);
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + "expected 'NAME = EXPR'");
    if (!have_vars) throw InputError(where + "equation before the vars line");
    std::istringstream lhs(line.substr(0, eq));
    std::string name, extra;
    lhs >> name;
    if (name.empty() || (lhs >> extra)) throw InputError(where + "left-hand side must be a single name");
    for (const auto& [n, _] : eqs)
      if (n == name) throw InputError(where + "duplicate equation for " + name);
    eqs.emplace_back(name, detail::ExprParser(line.substr(eq + 1), vars, lineno, eq + 1).parse());
  }
  if (!have_vars) throw InputError("expression file: missing vars line");
  if (eqs.empty()) throw InputError("expression file: no equations");
  std::vector<std::string> outs;
  for (const auto& [n, _] : eqs) outs.push_back(n);
  std::vector<std::string> sorted_outs = outs, sorted_vars = vars;
  std::sort(sorted_outs.begin(), sorted_outs.end());
  std::sort(sorted_vars.begin(), sorted_vars.end());
  if (sorted_outs == sorted_vars) outs = vars;
  std::vector<Expr> comps;
  for (const auto& o : outs)
    for (const auto& [n, e] : eqs)
      if (n == o) comps.push_back(e);
  return FunExpr(vars, outs, std::move(comps));
}

// ---------------------------------------------------------------------------
// Kleene iteration

template <class Num>
struct KleeneResult {
  std::vector<Num> value;
  Num residual;
  std::size_t iterations;
  static constexpr bool exact = !std::is_same_v<Num, double>;
};

class KleeneBudgetExceeded : public IterationBudgetExceeded {
 public:
  KleeneBudgetExceeded(std::size_t iterations, std::vector<double> last, double residual)
      : IterationBudgetExceeded("Kleene iteration did not converge within " + std::to_string(iterations) +
                                " iterations (residual " + fmt(residual) + ")"),
        last_(std::move(last)), residual_(residual) {}
  const std::vector<double>& last_iterate() const { return last_; }
  double residual() const { return residual_; }

 private:
  static std::string fmt(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
  }
  std::vector<double> last_;
  double residual_;
};

namespace detail {

template <class Num>
Num distance(const std::vector<Num>& a, const std::vector<Num>& b) {
  Num d(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<Num, double>) {
      if (std::isinf(a[i]) && std::isinf(b[i])) continue;
    }
    Num e = a[i] < b[i] ? b[i] - a[i] : a[i] - b[i];
    if (e > d || e != e) d = e;
  }
  return d;
}

template <class Num>
double as_double(const Num& n) {
  if constexpr (std::is_same_v<Num, double>) return n;
  else return to_double(Rational(n));
}

}  // namespace detail

/// Least fixpoint of a monotone map, approximated from 0: iterates until two
/// consecutive iterates are within tol and the newer one has residual
/// ‖f(x) − x‖ ≤ tol. Num is double (floating) or Rational (exact).
template <class Num = double>
KleeneResult<Num> kleene_fixpoint(const FunExpr& f, Num tol, std::size_t max_iter = 10000) {
  if (!f.is_endomap()) throw InputError("kleene_fixpoint: the map must send each variable to an equation");
  if (!(tol > Num(0))) throw InputError("kleene_fixpoint: tolerance must be positive");
  std::vector<Num> x(f.inputs().size(), Num(0));
  Num step(0);
  for (std::size_t n = 1; n <= max_iter; ++n) {
    std::vector<Num> next = f(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      Num slack(0);
      if constexpr (std::is_same_v<Num, double>) slack = 1e-12 * std::max(1.0, std::abs(x[i]));
      if (next[i] + slack < x[i])
        throw PreconditionFailed("kleene_fixpoint: iterates are not ascending at step " + std::to_string(n) +
                                 "; the map is not monotone");
    }
    step = detail::distance(x, next);
    x = std::move(next);
    if (step <= tol) {
      Num residual = detail::distance(f(x), x);
      if (residual <= tol) return {std::move(x), residual, n};
    }
  }
  std::vector<double> last;
  for (const auto& v : x) last.push_back(detail::as_double(v));
  throw KleeneBudgetExceeded(max_iter, std::move(last), detail::as_double(detail::distance(f(x), x)));
}

/// Runs kleene_fixpoint on each map in parallel; results are in input order.
inline std::vector<KleeneResult<double>> kleene_batch(const std::vector<FunExpr>& maps, double tol,
                                                      std::size_t max_iter = 10000) {
  std::vector<std::future<KleeneResult<double>>> jobs;
  for (const auto& f : maps)
    jobs.push_back(std::async(std::launch::async, [&f, tol, max_iter] { return kleene_fixpoint<double>(f, tol, max_iter); }));
  std::vector<KleeneResult<double>> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// ---------------------------------------------------------------------------
// Uniformity

/// Coefficient matrix of a linear map, checked exactly on sample points.
inline std::vector<std::vector<Rational>> linear_coefficients(const FunExpr& h, std::size_t samples = 16,
                                                              unsigned seed = 1) {
  const std::size_t n = h.inputs().size(), m = h.outputs().size();
  std::vector<Rational> zero(n, 0);
  for (const auto& v : h(zero))
    if (v != 0) throw PreconditionFailed("h is not linear: h(0) ≠ 0");
  std::vector<std::vector<Rational>> coef(m, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> e(n, 0);
    e[j] = 1;
    auto col = h(e);
    for (std::size_t i = 0; i < m; ++i) coef[i][j] = col[i];
  }
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(0, 12), den(1, 6);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Rational> p(n);
    for (auto& v : p) v = Rational(num(rng), den(rng));
    auto got = h(p);
    for (std::size_t i = 0; i < m; ++i) {
      Rational want = 0;
      for (std::size_t j = 0; j < n; ++j) want += coef[i][j] * p[j];
      if (got[i] != want) throw PreconditionFailed("h is not linear");
    }
  }
  return coef;
}

struct UniformityReport {
  bool holds = false;
  std::vector<double> h_of_f_dagger, g_dagger;
  double distance = 0;
  /// Largest |h(f(p)) − g(h(p))| over the samples, computed exactly.
  double square_defect = 0;
  std::size_t samples = 0;
  double dagger_tolerance = 0;
};

/// Checks that h(f†) = g† up to tol, given h∘f = g∘h.
inline UniformityReport check_uniformity_report(const FunExpr& h, const FunExpr& f, const FunExpr& g, double tol,
                                                std::size_t samples = 32, unsigned seed = 7) {
  if (!f.is_endomap() || !g.is_endomap()) throw InputError("check_uniformity: f and g must be endomaps");
  if (h.inputs().size() != f.inputs().size() || h.outputs().size() != g.inputs().size())
    throw IndexMismatch("check_uniformity: h must map the space of f to the space of g");
  if (!(tol > 0)) throw InputError("check_uniformity: tolerance must be positive");
  auto coef = linear_coefficients(h);
  UniformityReport r;
  r.samples = samples;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(0, 16), den(1, 8);
  Rational defect = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Rational> p(f.inputs().size());
    for (auto& v : p) v = Rational(num(rng), den(rng));
    defect = std::max(defect, detail::distance(h(f(p)), g(h(p))));
  }
  r.square_defect = to_double(defect);
  if (defect > Rational(tol))
    throw PreconditionFailed("check_uniformity: h∘f and g∘h differ by " + std::to_string(r.square_defect) +
                             " on a sample point");
  double lip = 0;
  for (const auto& row : coef) {
    Rational sum = 0;
    for (const auto& c : row) sum += c;
    lip = std::max(lip, to_double(sum));
  }
  r.dagger_tolerance = tol / (2 * (lip + 1));
  auto fd = kleene_fixpoint<double>(f, r.dagger_tolerance);
  auto gd = kleene_fixpoint<double>(g, r.dagger_tolerance);
  r.h_of_f_dagger = h(fd.value);
  r.g_dagger = gd.value;
  r.distance = detail::distance(r.h_of_f_dagger, r.g_dagger);
  r.holds = r.distance <= tol;
  return r;
}

inline bool check_uniformity(const FunExpr& h, const FunExpr& f, const FunExpr& g, double tol) {
  return check_uniformity_report(h, f, g, tol).holds;
}

}  // namespace mull

#endif  // MULL_KLEENE_HPP
