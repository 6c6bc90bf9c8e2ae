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

#ifndef MULL_SYNTAX_HPP
#define MULL_SYNTAX_HPP

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mull/error.hpp"

namespace mull {

// ---------------------------------------------------------------------------
// Sorts

enum class Sort : std::uint8_t { Positive, Negative };

constexpr Sort dual(Sort s) {
  return s == Sort::Positive ? Sort::Negative : Sort::Positive;
}

inline std::string to_string(Sort s) { return s == Sort::Positive ? "+" : "-"; }

// ---------------------------------------------------------------------------
// Formulas

enum class Kind : std::uint8_t {
  One, Zero, Top, Bot,
  Tensor, Par, Plus, With, Lolli,
  OfCourse, WhyNot, Neg,
  Var, Mu, Nu,
};

/// Immutable handle to a type expression. Copies share structure.
class Formula {
 public:
  Formula() = default;

  static Formula one() { return make(Kind::One); }
  static Formula zero() { return make(Kind::Zero); }
  static Formula top() { return make(Kind::Top); }
  static Formula bot() { return make(Kind::Bot); }
  static Formula var(std::string name) { return make(Kind::Var, std::move(name)); }

  static Formula binary(Kind k, Formula a, Formula b) {
    return make(k, {}, std::move(a), std::move(b));
  }
  static Formula tensor(Formula a, Formula b) { return binary(Kind::Tensor, std::move(a), std::move(b)); }
  static Formula par(Formula a, Formula b) { return binary(Kind::Par, std::move(a), std::move(b)); }
  static Formula plus(Formula a, Formula b) { return binary(Kind::Plus, std::move(a), std::move(b)); }
  static Formula with(Formula a, Formula b) { return binary(Kind::With, std::move(a), std::move(b)); }
  static Formula lolli(Formula a, Formula b) { return binary(Kind::Lolli, std::move(a), std::move(b)); }

  static Formula unary(Kind k, Formula a) { return make(k, {}, std::move(a)); }
  static Formula of_course(Formula a) { return unary(Kind::OfCourse, std::move(a)); }
  static Formula why_not(Formula a) { return unary(Kind::WhyNot, std::move(a)); }
  static Formula neg(Formula a) { return unary(Kind::Neg, std::move(a)); }

  static Formula binder(Kind k, std::string name, Formula body) {
    return make(k, std::move(name), std::move(body));
  }
  static Formula mu(std::string name, Formula body) { return binder(Kind::Mu, std::move(name), std::move(body)); }
  static Formula nu(std::string name, Formula body) { return binder(Kind::Nu, std::move(name), std::move(body)); }

  bool empty() const { return node_ == nullptr; }
  Kind kind() const;
  /// Variable name for Var, bound name for Mu/Nu.
  const std::string& name() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  /// Operand of a unary node or body of a binder.
  const Formula& operand() const { return lhs(); }
  const Formula& body() const { return lhs(); }

  bool is_constant() const;
  bool is_unary() const;
  bool is_binary() const;
  bool is_binder() const;

  /// Structural equality (names compared literally).
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string name = {}, Formula a = {}, Formula b = {});

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  std::string name;
  Formula a;
  Formula b;
};

inline Formula Formula::make(Kind k, std::string name, Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{k, std::move(name), std::move(a), std::move(b)}));
}

inline Kind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::lhs() const { return node_->a; }
inline const Formula& Formula::rhs() const { return node_->b; }

inline bool Formula::is_constant() const {
  auto k = kind();
  return k == Kind::One || k == Kind::Zero || k == Kind::Top || k == Kind::Bot;
}
inline bool Formula::is_unary() const {
  auto k = kind();
  return k == Kind::OfCourse || k == Kind::WhyNot || k == Kind::Neg;
}
inline bool Formula::is_binary() const {
  auto k = kind();
  return k == Kind::Tensor || k == Kind::Par || k == Kind::Plus || k == Kind::With ||
         k == Kind::Lolli;
}
inline bool Formula::is_binder() const { return kind() == Kind::Mu || kind() == Kind::Nu; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Kind::Var || a.is_binder()) {
    if (a.name() != b.name()) return false;
  }
  if (a.is_constant() || a.kind() == Kind::Var) return true;
  if (a.is_binary()) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  return a.lhs() == b.lhs();
}

// ---------------------------------------------------------------------------
// Contexts

/// Ordered variable declarations `x1 : v1, ..., xn : vn` with distinct names.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<std::string, Sort>> entries) {
    for (const auto& [n, s] : entries) push(n, s);
  }

  void push(const std::string& name, Sort s) {
    if (find(name)) throw InputError("duplicate variable in context: " + name);
    entries_.emplace_back(name, s);
  }

  /// Copy of this context where `name` is (re)bound to `s`, shadowing any earlier binding.
  Context extended(const std::string& name, Sort s) const {
    Context c;
    for (const auto& e : entries_)
      if (e.first != name) c.entries_.push_back(e);
    c.entries_.emplace_back(name, s);
    return c;
  }

  std::optional<Sort> find(const std::string& name) const {
    for (const auto& [n, s] : entries_)
      if (n == name) return s;
    return std::nullopt;
  }

  const std::vector<std::pair<std::string, Sort>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Sort>> entries_;
};

// ---------------------------------------------------------------------------
// Errors

class ParseError : public InputError {
 public:
  ParseError(std::size_t offset, std::size_t line, std::size_t column,
             std::vector<std::string> expected, const std::string& found)
      : InputError(format(offset, line, column, expected, found)),
        offset_(offset), line_(line), column_(column), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t offset, std::size_t line, std::size_t column,
                            const std::vector<std::string>& expected, const std::string& found) {
    std::ostringstream os;
    os << "syntax error at " << line << ":" << column << " (offset " << offset << "): expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ", found " << found;
    return os.str();
  }

  std::size_t offset_, line_, column_;
  std::vector<std::string> expected_;
};

class UnboundVariable : public InputError {
 public:
  explicit UnboundVariable(const std::string& name)
      : InputError("unbound variable: " + name), name_(name) {}
  const std::string& variable() const { return name_; }

 private:
  std::string name_;
};

std::string print(const Formula& f);

class VarianceError : public InputError {
 public:
  VarianceError(Formula subterm, Sort expected, std::optional<Sort> derived)
      : InputError(format(subterm, expected, derived)),
        subterm_(std::move(subterm)), expected_(expected), derived_(derived) {}

  const Formula& subterm() const { return subterm_; }
  Sort expected() const { return expected_; }
  /// Empty when the subterm has no sort at all.
  std::optional<Sort> derived() const { return derived_; }

 private:
  static std::string format(const Formula& f, Sort expected, std::optional<Sort> derived) {
    std::string s = "variance error: `" + print(f) + "` expected sort " + to_string(expected);
    s += derived ? ", derived " + to_string(*derived) : ", no sort derivable";
    return s;
  }

  Formula subterm_;
  Sort expected_;
  std::optional<Sort> derived_;
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok : std::uint8_t {
  Ident, One, Zero, Top, Bot, Mu, Nu,
  Bang, Quest, Tilde, Star, Bar, Plus, Amp, Lolli,
  LParen, RParen, Dot, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
  std::size_t line;
  std::size_t column;
};

inline bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(unsigned char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::End, "", pos_, line_, col_};
      if (pos_ >= src_.size()) {
        t.text = "end of input";
        out.push_back(t);
        return out;
      }
      if (lex_symbol(t) || lex_word(t)) {
        out.push_back(std::move(t));
        continue;
      }
      std::string bad(1, src_[pos_]);
      throw ParseError(pos_, line_, col_, {"formula"}, "'" + bad + "'");
    }
  }

 private:
  void advance(std::size_t n) {
    pos_ += n;
    col_ += n;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else {
        break;
      }
    }
  }

  bool lex_symbol(Token& t) {
    static const std::pair<std::string_view, Tok> table[] = {
        {"-o", Tok::Lolli}, {"!", Tok::Bang},   {"?", Tok::Quest},  {"~", Tok::Tilde},
        {"*", Tok::Star},   {"|", Tok::Bar},    {"+", Tok::Plus},   {"&", Tok::Amp},
        {"(", Tok::LParen}, {")", Tok::RParen}, {".", Tok::Dot},    {"1", Tok::One},
        {"0", Tok::Zero},
        // UTF-8 spellings
        {"⊗", Tok::Star}, {"⅋", Tok::Bar},  {"⊕", Tok::Plus},
        {"⊸", Tok::Lolli}, {"μ", Tok::Mu},  {"ν", Tok::Nu},
        {"⊤", Tok::Top},  {"⊥", Tok::Bot},  {"¬", Tok::Tilde},
    };
    for (const auto& [sym, kind] : table) {
      if (src_.substr(pos_, sym.size()) == sym) {
        // "1x" or "0a" is not a constant followed by an identifier.
        if ((kind == Tok::One || kind == Tok::Zero) && pos_ + 1 < src_.size() &&
            ident_char(static_cast<unsigned char>(src_[pos_ + 1])))
          return false;
        t.kind = kind;
        t.text = std::string(sym);
        pos_ += sym.size();
        ++col_;
        return true;
      }
    }
    return false;
  }

  bool lex_word(Token& t) {
    if (!ident_start(static_cast<unsigned char>(src_[pos_]))) return false;
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) advance(1);
    t.text = std::string(src_.substr(start, pos_ - start));
    if (t.text == "mu") t.kind = Tok::Mu;
    else if (t.text == "nu") t.kind = Tok::Nu;
    else if (t.text == "top") t.kind = Tok::Top;
    else if (t.text == "bot") t.kind = Tok::Bot;
    else t.kind = Tok::Ident;
    return true;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = lolli();
    if (peek().kind != Tok::End) fail({"operator", "end of input"});
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? t.text : "'" + t.text + "'";
    throw ParseError(t.offset, t.line, t.column, std::move(expected), found);
  }

  Formula lolli() {
    Formula lhs = additive();
    if (peek().kind == Tok::Lolli) {
      take();
      return Formula::lolli(lhs, lolli());
    }
    return lhs;
  }

  Formula additive() {
    Formula f = multiplicative();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        take();
        f = Formula::plus(f, multiplicative());
      } else if (peek().kind == Tok::Amp) {
        take();
        f = Formula::with(f, multiplicative());
      } else {
        return f;
      }
    }
  }

  Formula multiplicative() {
    Formula f = unary();
    for (;;) {
      if (peek().kind == Tok::Star) {
        take();
        f = Formula::tensor(f, unary());
      } else if (peek().kind == Tok::Bar) {
        take();
        f = Formula::par(f, unary());
      } else {
        return f;
      }
    }
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Bang: take(); return Formula::of_course(unary());
      case Tok::Quest: take(); return Formula::why_not(unary());
      case Tok::Tilde: take(); return Formula::neg(unary());
      case Tok::Mu:
      case Tok::Nu: {
        Kind k = take().kind == Tok::Mu ? Kind::Mu : Kind::Nu;
        if (peek().kind != Tok::Ident) fail({"identifier"});
        std::string name = take().text;
        if (peek().kind != Tok::Dot) fail({"'.'"});
        take();
        return Formula::binder(k, std::move(name), lolli());
      }
      default: return atom();
    }
  }

  Formula atom() {
    switch (peek().kind) {
      case Tok::One: take(); return Formula::one();
      case Tok::Zero: take(); return Formula::zero();
      case Tok::Top: take(); return Formula::top();
      case Tok::Bot: take(); return Formula::bot();
      case Tok::Ident: return Formula::var(take().text);
      case Tok::LParen: {
        take();
        Formula f = lolli();
        if (peek().kind != Tok::RParen) fail({"operator", "')'"});
        take();
        return f;
      }
      default: fail({"formula"});
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parses the ASCII/UTF-8 concrete syntax. Precedence, loosest first:
/// `-o` (right), `+ &` (left), `* |` (left), prefix `! ? ~`; binders extend
/// as far right as possible.
inline Formula parse(std::string_view text) {
  return detail::Parser(detail::Lexer(text).run()).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(Kind k) {
  switch (k) {
    case Kind::Lolli: return 1;
    case Kind::Plus:
    case Kind::With: return 2;
    case Kind::Tensor:
    case Kind::Par: return 3;
    default: return 4;
  }
}

inline const char* symbol(Kind k) {
  switch (k) {
    case Kind::One: return "1";
    case Kind::Zero: return "0";
    case Kind::Top: return "top";
    case Kind::Bot: return "bot";
    case Kind::Tensor: return " * ";
    case Kind::Par: return " | ";
    case Kind::Plus: return " + ";
    case Kind::With: return " & ";
    case Kind::Lolli: return " -o ";
    case Kind::OfCourse: return "!";
    case Kind::WhyNot: return "?";
    case Kind::Neg: return "~";
    case Kind::Mu: return "mu ";
    case Kind::Nu: return "nu ";
    case Kind::Var: return "";
  }
  return "";
}

// `tail`: nothing follows this subterm before the end of its group, so a
// binder may be printed without parentheses.
inline void print_into(std::string& out, const Formula& f, int ctx_prec, bool tail) {
  if (f.is_constant()) {
    out += symbol(f.kind());
  } else if (f.kind() == Kind::Var) {
    out += f.name();
  } else if (f.is_unary()) {
    out += symbol(f.kind());
    print_into(out, f.operand(), 4, tail);
  } else if (f.is_binder()) {
    if (!tail) out += '(';
    out += symbol(f.kind());
    out += f.name();
    out += ". ";
    print_into(out, f.body(), 1, true);
    if (!tail) out += ')';
  } else {
    int p = precedence(f.kind());
    bool paren = p < ctx_prec;
    bool right_assoc = f.kind() == Kind::Lolli;
    if (paren) out += '(';
    print_into(out, f.lhs(), right_assoc ? p + 1 : p, false);
    out += symbol(f.kind());
    print_into(out, f.rhs(), right_assoc ? p : p + 1, paren || tail);
    if (paren) out += ')';
  }
}

}  // namespace detail

inline std::string print(const Formula& f) {
  std::string out;
  detail::print_into(out, f, 1, true);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables, alpha-equivalence, substitution

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (f.kind() == Kind::Var) {
    if (!bound.count(f.name())) out.insert(f.name());
  } else if (f.is_binder()) {
    bool fresh = bound.insert(f.name()).second;
    collect_free(f.body(), bound, out);
    if (fresh) bound.erase(f.name());
  } else if (f.is_unary()) {
    collect_free(f.operand(), bound, out);
  } else if (f.is_binary()) {
    collect_free(f.lhs(), bound, out);
    collect_free(f.rhs(), bound, out);
  }
}

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

inline bool is_closed(const Formula& f) { return free_variables(f).empty(); }

namespace detail {

using BinderStack = std::vector<std::string>;

inline std::optional<std::size_t> lookup(const BinderStack& s, const std::string& n) {
  for (std::size_t i = s.size(); i-- > 0;)
    if (s[i] == n) return s.size() - 1 - i;
  return std::nullopt;
}

inline bool alpha_eq(const Formula& a, const Formula& b, BinderStack& sa, BinderStack& sb) {
  if (a.kind() != b.kind()) return false;
  if (a.is_constant()) return true;
  if (a.kind() == Kind::Var) {
    auto ia = lookup(sa, a.name()), ib = lookup(sb, b.name());
    if (ia || ib) return ia == ib;
    return a.name() == b.name();
  }
  if (a.is_binder()) {
    sa.push_back(a.name());
    sb.push_back(b.name());
    bool r = alpha_eq(a.body(), b.body(), sa, sb);
    sa.pop_back();
    sb.pop_back();
    return r;
  }
  if (a.is_unary()) return alpha_eq(a.operand(), b.operand(), sa, sb);
  return alpha_eq(a.lhs(), b.lhs(), sa, sb) && alpha_eq(a.rhs(), b.rhs(), sa, sb);
}

}  // namespace detail

inline bool alpha_equal(const Formula& a, const Formula& b) {
  detail::BinderStack sa, sb;
  return detail::alpha_eq(a, b, sa, sb);
}

/// `base` primed until it avoids every name in `avoid`.
inline std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (avoid.count(base)) base += '\'';
  return base;
}

/// Rebuilds a node with new children, keeping kind and name.
inline Formula rebuild(const Formula& f, Formula a, Formula b = {}) {
  if (f.is_binder()) return Formula::binder(f.kind(), f.name(), std::move(a));
  if (f.is_unary()) return Formula::unary(f.kind(), std::move(a));
  return Formula::binary(f.kind(), std::move(a), std::move(b));
}

/// Capture-avoiding substitution f[g/x].
inline Formula substitute(const Formula& f, const std::string& x, const Formula& g) {
  switch (f.kind()) {
    case Kind::Var: return f.name() == x ? g : f;
    case Kind::Mu:
    case Kind::Nu: {
      if (f.name() == x) return f;
      auto body_free = free_variables(f.body());
      if (!body_free.count(x)) return f;
      auto g_free = free_variables(g);
      if (!g_free.count(f.name())) return Formula::binder(f.kind(), f.name(), substitute(f.body(), x, g));
      std::set<std::string> avoid = g_free;
      avoid.insert(body_free.begin(), body_free.end());
      avoid.insert(x);
      std::string y = fresh_name(f.name(), avoid);
      Formula renamed = substitute(f.body(), f.name(), Formula::var(y));
      return Formula::binder(f.kind(), y, substitute(renamed, x, g));
    }
    default:
      if (f.is_constant()) return f;
      if (f.is_unary()) return rebuild(f, substitute(f.operand(), x, g));
      return rebuild(f, substitute(f.lhs(), x, g), substitute(f.rhs(), x, g));
  }
}

/// One-step unfolding of a fixpoint formula: b[phi x.b / x].
inline Formula unfold(const Formula& fix) {
  if (!fix.is_binder()) throw InputError("unfold: not a fixpoint formula: " + print(fix));
  return substitute(fix.body(), fix.name(), fix);
}

// ---------------------------------------------------------------------------
// Variance

namespace detail {

// Bit 0: derivable at +, bit 1: derivable at -.
using SortSet = std::uint8_t;
constexpr SortSet kPos = 1, kNeg = 2, kBoth = 3;

constexpr SortSet bit(Sort s) { return s == Sort::Positive ? kPos : kNeg; }
constexpr SortSet flip(SortSet s) {
  return static_cast<SortSet>(((s & kPos) ? kNeg : 0) | ((s & kNeg) ? kPos : 0));
}

inline SortSet derivable(const Context& ctx, const Formula& f) {
  switch (f.kind()) {
    case Kind::One:
    case Kind::Zero:
    case Kind::Top:
    case Kind::Bot: return kBoth;
    case Kind::Var: {
      auto s = ctx.find(f.name());
      if (!s) throw UnboundVariable(f.name());
      return bit(*s);
    }
    case Kind::Tensor:
    case Kind::Par:
    case Kind::Plus:
    case Kind::With: return derivable(ctx, f.lhs()) & derivable(ctx, f.rhs());
    case Kind::Lolli: return flip(derivable(ctx, f.lhs())) & derivable(ctx, f.rhs());
    case Kind::OfCourse:
    case Kind::WhyNot: return derivable(ctx, f.operand());
    case Kind::Neg: return flip(derivable(ctx, f.operand()));
    case Kind::Mu:
    case Kind::Nu: {
      SortSet out = 0;
      for (Sort v : {Sort::Positive, Sort::Negative})
        if (derivable(ctx.extended(f.name(), v), f.body()) & bit(v)) out |= bit(v);
      return out;
    }
  }
  return 0;
}

inline std::optional<Sort> single(SortSet s) {
  if (s == kPos) return Sort::Positive;
  if (s == kNeg) return Sort::Negative;
  return std::nullopt;
}

// Precondition: `want` is not derivable for f under ctx.
[[noreturn]] inline void explain(const Context& ctx, const Formula& f, Sort want) {
  SortSet got = derivable(ctx, f);
  if (got != 0 && !f.is_binder()) throw VarianceError(f, want, single(got));
  switch (f.kind()) {
    case Kind::Tensor:
    case Kind::Par:
    case Kind::Plus:
    case Kind::With:
      if (!(derivable(ctx, f.lhs()) & bit(want))) explain(ctx, f.lhs(), want);
      explain(ctx, f.rhs(), want);
    case Kind::Lolli:
      if (!(derivable(ctx, f.lhs()) & bit(dual(want)))) explain(ctx, f.lhs(), dual(want));
      explain(ctx, f.rhs(), want);
    case Kind::OfCourse:
    case Kind::WhyNot: explain(ctx, f.operand(), want);
    case Kind::Neg: explain(ctx, f.operand(), dual(want));
    case Kind::Mu:
    case Kind::Nu: {
      Context inner = ctx.extended(f.name(), want);
      SortSet b = derivable(inner, f.body());
      if (b != 0) throw VarianceError(f.body(), want, single(b));
      explain(inner, f.body(), want);
    }
    default: throw VarianceError(f, want, single(got));
  }
}

}  // namespace detail

/// Whether `ctx |- f : v` is derivable.
inline bool has_sort(const Context& ctx, const Formula& f, Sort v) {
  return detail::derivable(ctx, f) & detail::bit(v);
}

/// Sort of `f` under `ctx`, preferring + when both are derivable (closed
/// formulas and bodies that never touch a sorted variable).
inline Sort check_variance(const Context& ctx, const Formula& f) {
  detail::SortSet s = detail::derivable(ctx, f);
  if (s & detail::kPos) return Sort::Positive;
  if (s & detail::kNeg) return Sort::Negative;
  detail::explain(ctx, f, Sort::Positive);
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace detail {

// Exchanges free `x` and `~x`.
inline Formula swap_negated(const Formula& f, const std::string& x) {
  if (f.kind() == Kind::Var) return f.name() == x ? Formula::neg(f) : f;
  if (f.kind() == Kind::Neg && f.operand().kind() == Kind::Var && f.operand().name() == x)
    return f.operand();
  if (f.is_constant()) return f;
  if (f.is_binder()) return f.name() == x ? f : rebuild(f, swap_negated(f.body(), x));
  if (f.is_unary()) return rebuild(f, swap_negated(f.operand(), x));
  return rebuild(f, swap_negated(f.lhs(), x), swap_negated(f.rhs(), x));
}

}  // namespace detail

Formula nnf(const Formula& f);

/// nnf(~f).
inline Formula negated_nnf(const Formula& f) {
  switch (f.kind()) {
    case Kind::One: return Formula::bot();
    case Kind::Bot: return Formula::one();
    case Kind::Zero: return Formula::top();
    case Kind::Top: return Formula::zero();
    case Kind::Var: return Formula::neg(f);
    case Kind::Neg: return nnf(f.operand());
    case Kind::Tensor: return Formula::par(negated_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Kind::Par: return Formula::tensor(negated_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Kind::Plus: return Formula::with(negated_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Kind::With: return Formula::plus(negated_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Kind::Lolli: return Formula::tensor(nnf(f.lhs()), negated_nnf(f.rhs()));
    case Kind::OfCourse: return Formula::why_not(negated_nnf(f.operand()));
    case Kind::WhyNot: return Formula::of_course(negated_nnf(f.operand()));
    case Kind::Mu:
      return Formula::nu(f.name(), detail::swap_negated(negated_nnf(f.body()), f.name()));
    case Kind::Nu:
      return Formula::mu(f.name(), detail::swap_negated(negated_nnf(f.body()), f.name()));
  }
  return f;
}

/// De Morgan normal form: negation only on variables. `-o` is kept in
/// positive position.
inline Formula nnf(const Formula& f) {
  if (f.kind() == Kind::Neg) return negated_nnf(f.operand());
  if (f.is_constant() || f.kind() == Kind::Var) return f;
  if (f.is_unary() || f.is_binder()) return rebuild(f, nnf(f.operand()));
  return rebuild(f, nnf(f.lhs()), nnf(f.rhs()));
}

/// Whether `Neg` occurs only directly above variables.
inline bool is_nnf(const Formula& f) {
  if (f.kind() == Kind::Neg) return f.operand().kind() == Kind::Var;
  if (f.is_constant() || f.kind() == Kind::Var) return true;
  if (f.is_unary() || f.is_binder()) return is_nnf(f.operand());
  return is_nnf(f.lhs()) && is_nnf(f.rhs());
}

/// Whether any `!` or `?` occurs in f.
inline bool has_exponential(const Formula& f) {
  if (f.kind() == Kind::OfCourse || f.kind() == Kind::WhyNot) return true;
  if (f.is_constant() || f.kind() == Kind::Var) return false;
  if (f.is_unary() || f.is_binder()) return has_exponential(f.operand());
  return has_exponential(f.lhs()) || has_exponential(f.rhs());
}

inline bool contains_kind(const Formula& f, Kind k) {
  if (f.kind() == k) return true;
  if (f.is_constant() || f.kind() == Kind::Var) return false;
  if (f.is_unary() || f.is_binder()) return contains_kind(f.operand(), k);
  return contains_kind(f.lhs(), k) || contains_kind(f.rhs(), k);
}

}  // namespace mull

#endif  // MULL_SYNTAX_HPP
