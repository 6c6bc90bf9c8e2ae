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

// The relational model: symbolic elements, carriers, relations, and the
// interpretation of formulas on objects and on relations. Fixpoint carriers
// are depth-truncated approximants.

#ifndef MULL_REL_HPP
#define MULL_REL_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mull/error.hpp"
#include "mull/syntax.hpp"

namespace mull {

// ---------------------------------------------------------------------------
// Elements

enum class ElemKind : std::uint8_t { Unit, InL, InR, Pair, Bag, Fold };

/// An immutable element term. Bags keep their members sorted, so structural
/// equality is multiset equality.
class Elem {
 public:
  static Elem unit() {
    static const Elem u = make(ElemKind::Unit, {});
    return u;
  }
  static Elem inl(Elem e) { return make(ElemKind::InL, {std::move(e)}); }
  static Elem inr(Elem e) { return make(ElemKind::InR, {std::move(e)}); }
  static Elem pair(Elem a, Elem b) { return make(ElemKind::Pair, {std::move(a), std::move(b)}); }
  static Elem fold(Elem e) { return make(ElemKind::Fold, {std::move(e)}); }
  static Elem bag(std::vector<Elem> members) {
    std::sort(members.begin(), members.end());
    return make(ElemKind::Bag, std::move(members));
  }
  /// n-th element of the carrier of "mu x. 1 + x".
  static Elem numeral(std::size_t n) {
    Elem e = fold(inl(unit()));
    for (std::size_t i = 0; i < n; ++i) e = fold(inr(e));
    return e;
  }

  ElemKind kind() const { return node_->kind; }
  const std::vector<Elem>& children() const { return node_->children; }
  const Elem& child(std::size_t i = 0) const { return node_->children[i]; }
  /// Maximal nesting of Fold constructors.
  std::size_t fold_depth() const { return node_->fold_depth; }

  friend std::strong_ordering operator<=>(const Elem& a, const Elem& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    const auto& x = a.children();
    const auto& y = b.children();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
      if (auto c = x[i] <=> y[i]; c != 0) return c;
    return x.size() <=> y.size();
  }
  friend bool operator==(const Elem& a, const Elem& b) { return (a <=> b) == 0; }

 private:
  struct Node {
    ElemKind kind;
    std::vector<Elem> children;
    std::size_t fold_depth;
  };

  static Elem make(ElemKind k, std::vector<Elem> children) {
    std::size_t depth = 0;
    for (const auto& c : children) depth = std::max(depth, c.fold_depth());
    if (k == ElemKind::Fold) ++depth;
    Elem e;
    e.node_ = std::make_shared<const Node>(Node{k, std::move(children), depth});
    return e;
  }

  Elem() = default;
  std::shared_ptr<const Node> node_;
};

inline std::string to_string(const Elem& e) {
  switch (e.kind()) {
    case ElemKind::Unit: return "*";
    case ElemKind::InL: return "inl " + to_string(e.child());
    case ElemKind::InR: return "inr " + to_string(e.child());
    case ElemKind::Pair: return "(" + to_string(e.child(0)) + ", " + to_string(e.child(1)) + ")";
    case ElemKind::Fold: {
      // Numerals print as #n.
      std::size_t n = 0;
      const Elem* cur = &e;
      while (cur->kind() == ElemKind::Fold && cur->child().kind() == ElemKind::InR) {
        cur = &cur->child().child();
        ++n;
      }
      if (cur->kind() == ElemKind::Fold && cur->child().kind() == ElemKind::InL &&
          cur->child().child().kind() == ElemKind::Unit)
        return "#" + std::to_string(n);
      return "fold(" + to_string(e.child()) + ")";
    }
    case ElemKind::Bag: {
      std::string s = "[";
      for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? ", " : "") + to_string(e.children()[i]);
      return s + "]";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Carriers and relations

struct Budgets {
  std::size_t depth = 4;        // k: unfoldings of each fixpoint
  std::size_t bag = 2;          // m: maximal bag size
  std::size_t max_carrier = 100000;
  std::size_t max_orthogonal = 12;  // largest carrier for exact transversal computation
  std::size_t max_iterations = 100000;
};

/// A finite, duplicate-free, sorted set of elements. `stabilized` is false
/// when some fixpoint approximant inside it still grew at the last unfolding.
class Carrier {
 public:
  Carrier() = default;
  explicit Carrier(std::vector<Elem> elems, bool stabilized = true) : elems_(std::move(elems)), stabilized_(stabilized) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  static Carrier unit() { return Carrier({Elem::unit()}); }
  static Carrier numerals(std::size_t n) {
    std::vector<Elem> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Elem::numeral(i));
    return Carrier(std::move(v));
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const Elem& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Elem>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  bool stabilized() const { return stabilized_; }

  std::optional<std::size_t> index_of(const Elem& e) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), e);
    if (it == elems_.end() || !(*it == e)) return std::nullopt;
    return static_cast<std::size_t>(it - elems_.begin());
  }
  bool contains(const Elem& e) const { return index_of(e).has_value(); }
  bool subset_of(const Carrier& o) const {
    return std::includes(o.elems_.begin(), o.elems_.end(), elems_.begin(), elems_.end());
  }

  friend bool operator==(const Carrier& a, const Carrier& b) { return a.elems_ == b.elems_; }

 private:
  std::vector<Elem> elems_;
  bool stabilized_ = true;
};

/// A relation between two carriers, stored as sorted index pairs.
class Relation {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  Relation(Carrier source, Carrier target, std::vector<Pair> pairs = {})
      : source_(std::move(source)), target_(std::move(target)), pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    for (auto [a, b] : pairs_)
      if (a >= source_.size() || b >= target_.size()) throw CarrierMismatch("relation pair outside its carriers");
  }

  static Relation from_elems(Carrier source, Carrier target, const std::vector<std::pair<Elem, Elem>>& pairs) {
    std::vector<Pair> idx;
    for (const auto& [a, b] : pairs) {
      auto i = source.index_of(a), j = target.index_of(b);
      if (!i || !j) throw CarrierMismatch("relation pair outside its carriers: (" + to_string(a) + ", " +
                                          to_string(b) + ")");
      idx.emplace_back(*i, *j);
    }
    return Relation(std::move(source), std::move(target), std::move(idx));
  }

  static Relation identity(const Carrier& c) {
    std::vector<Pair> p;
    for (std::size_t i = 0; i < c.size(); ++i) p.emplace_back(i, i);
    return Relation(c, c, std::move(p));
  }

  const Carrier& source() const { return source_; }
  const Carrier& target() const { return target_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool contains(std::size_t a, std::size_t b) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), Pair{a, b});
  }

  std::vector<std::pair<Elem, Elem>> elem_pairs() const {
    std::vector<std::pair<Elem, Elem>> out;
    for (auto [a, b] : pairs_) out.emplace_back(source_[a], target_[b]);
    return out;
  }

  Relation transpose() const {
    std::vector<Pair> p;
    for (auto [a, b] : pairs_) p.emplace_back(b, a);
    return Relation(target_, source_, std::move(p));
  }

  /// Image of a set of source indices.
  std::vector<bool> image(const std::vector<bool>& xs) const {
    std::vector<bool> out(target_.size());
    for (auto [a, b] : pairs_)
      if (xs[a]) out[b] = true;
    return out;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.pairs_ == b.pairs_;
  }

 private:
  Carrier source_, target_;
  std::vector<Pair> pairs_;
};

/// g ∘ f, i.e. first f then g.
inline Relation compose_rel(const Relation& f, const Relation& g) {
  if (!(f.target() == g.source())) throw CarrierMismatch("compose_rel: target of f differs from source of g");
  std::vector<std::vector<std::size_t>> next(g.source().size());
  for (auto [b, c] : g.pairs()) next[b].push_back(c);
  std::vector<Relation::Pair> out;
  for (auto [a, b] : f.pairs())
    for (auto c : next[b]) out.emplace_back(a, c);
  return Relation(f.source(), g.target(), std::move(out));
}

// ---------------------------------------------------------------------------
// Carrier constructions

namespace detail {

inline void check_cap(std::size_t n, const Budgets& b) {
  if (n > b.max_carrier)
    throw CarrierTooLarge("carrier of size " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(b.max_carrier));
}

inline std::size_t checked_mul(std::size_t a, std::size_t b, const Budgets& bud) {
  if (a != 0 && b > bud.max_carrier / a) check_cap(bud.max_carrier + 1, bud);
  return a * b;
}

inline Carrier product(const Carrier& a, const Carrier& b, const Budgets& bud) {
  check_cap(checked_mul(a.size(), b.size(), bud), bud);
  std::vector<Elem> v;
  v.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) v.push_back(Elem::pair(x, y));
  return Carrier(std::move(v), a.stabilized() && b.stabilized());
}

inline Carrier sum(const Carrier& a, const Carrier& b, const Budgets& bud) {
  check_cap(a.size() + b.size(), bud);
  std::vector<Elem> v;
  for (const auto& x : a) v.push_back(Elem::inl(x));
  for (const auto& y : b) v.push_back(Elem::inr(y));
  return Carrier(std::move(v), a.stabilized() && b.stabilized());
}

/// Number of multisets of size <= m over n elements, saturating above cap.
inline std::size_t bag_count(std::size_t n, std::size_t m, std::size_t cap) {
  // sum_{j<=m} C(n+j-1, j) = C(n+m, m)
  long double c = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    c = c * static_cast<long double>(n + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(c + 0.5L);
}

/// Calls fn(indices) for every nondecreasing index sequence of length <= m.
template <class Fn>
void for_each_multiset(std::size_t n, std::size_t m, Fn&& fn) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto& self, std::size_t from) -> void {
    fn(static_cast<const std::vector<std::size_t>&>(cur));
    if (cur.size() == m) return;
    for (std::size_t i = from; i < n; ++i) {
      cur.push_back(i);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

inline Carrier bags(const Carrier& a, const Budgets& bud) {
  check_cap(bag_count(a.size(), bud.bag, bud.max_carrier), bud);
  std::vector<Elem> v;
  for_each_multiset(a.size(), bud.bag, [&](const std::vector<std::size_t>& idx) {
    std::vector<Elem> members;
    for (auto i : idx) members.push_back(a[i]);
    v.push_back(Elem::bag(std::move(members)));
  });
  return Carrier(std::move(v), a.stabilized());
}

inline Carrier folded(const Carrier& a) {
  std::vector<Elem> v;
  for (const auto& x : a) v.push_back(Elem::fold(x));
  return Carrier(std::move(v), a.stabilized());
}

inline Carrier with_stability(Carrier c, bool stabilized) {
  return Carrier(std::vector<Elem>(c.elements()), stabilized);
}

}  // namespace detail

using CarrierEnv = std::map<std::string, Carrier>;

/// The carrier of `f` in Rel. Negation is the identity on objects, so any
/// variance is accepted. Fixpoints are the k-th Kleene approximant wrapped in
/// Fold; the result records whether the last unfolding changed anything.
inline Carrier interpret_carrier(const Formula& f, const CarrierEnv& env = {}, const Budgets& b = {}) {
  switch (f.kind()) {
    case Kind::One:
    case Kind::Bot: return Carrier::unit();
    case Kind::Zero:
    case Kind::Top: return Carrier();
    case Kind::Var: {
      auto it = env.find(f.name());
      if (it == env.end()) throw UnboundVariable(f.name());
      return it->second;
    }
    case Kind::Tensor:
    case Kind::Par:
    case Kind::Lolli:
      return detail::product(interpret_carrier(f.lhs(), env, b), interpret_carrier(f.rhs(), env, b), b);
    case Kind::Plus:
    case Kind::With: return detail::sum(interpret_carrier(f.lhs(), env, b), interpret_carrier(f.rhs(), env, b), b);
    case Kind::OfCourse:
    case Kind::WhyNot: return detail::bags(interpret_carrier(f.operand(), env, b), b);
    case Kind::Neg: return interpret_carrier(f.operand(), env, b);
    case Kind::Mu:
    case Kind::Nu: {
      CarrierEnv inner = env;
      Carrier prev, cur;
      for (std::size_t n = 0; n < b.depth; ++n) {
        prev = cur;
        inner[f.name()] = cur;
        cur = detail::folded(interpret_carrier(f.body(), inner, b));
      }
      bool grew = b.depth == 0 || !(cur == prev);
      return detail::with_stability(cur, cur.stabilized() && !grew);
    }
  }
  throw InputError("unknown formula kind");
}

// ---------------------------------------------------------------------------
// Functorial action on relations

using RelationEnv = std::map<std::string, Relation>;

namespace detail {

inline Relation act_product(const Relation& r, const Relation& s, const Budgets& b) {
  Carrier src = product(r.source(), s.source(), b);
  Carrier tgt = product(r.target(), s.target(), b);
  // Pair(x, y) sits at index x * |B| + y because products are built in order.
  std::vector<Relation::Pair> p;
  for (auto [a1, b1] : r.pairs())
    for (auto [a2, b2] : s.pairs()) p.emplace_back(a1 * s.source().size() + a2, b1 * s.target().size() + b2);
  return Relation(std::move(src), std::move(tgt), std::move(p));
}

inline Relation act_sum(const Relation& r, const Relation& s, const Budgets& b) {
  Carrier src = sum(r.source(), s.source(), b);
  Carrier tgt = sum(r.target(), s.target(), b);
  std::vector<Relation::Pair> p(r.pairs());
  for (auto [a, c] : s.pairs()) p.emplace_back(a + r.source().size(), c + r.target().size());
  return Relation(std::move(src), std::move(tgt), std::move(p));
}

inline Relation act_bags(const Relation& r, const Budgets& b) {
  Carrier src = bags(r.source(), b);
  Carrier tgt = bags(r.target(), b);
  std::vector<std::pair<Elem, Elem>> p;
  for_each_multiset(r.size(), b.bag, [&](const std::vector<std::size_t>& idx) {
    std::vector<Elem> xs, ys;
    for (auto i : idx) {
      xs.push_back(r.source()[r.pairs()[i].first]);
      ys.push_back(r.target()[r.pairs()[i].second]);
    }
    p.emplace_back(Elem::bag(std::move(xs)), Elem::bag(std::move(ys)));
  });
  return Relation::from_elems(std::move(src), std::move(tgt), p);
}

inline Relation act_fold(const Relation& r) {
  // Fold is order preserving, so indices carry over.
  return Relation(folded(r.source()), folded(r.target()), r.pairs());
}

inline RelationEnv transposed(const RelationEnv& env) {
  RelationEnv out;
  for (const auto& [k, v] : env) out.emplace(k, v.transpose());
  return out;
}

inline Relation act(const Formula& f, const RelationEnv& env, const Budgets& b) {
  switch (f.kind()) {
    case Kind::One:
    case Kind::Bot: return Relation::identity(Carrier::unit());
    case Kind::Zero:
    case Kind::Top: return Relation(Carrier(), Carrier());
    case Kind::Var: {
      auto it = env.find(f.name());
      if (it == env.end()) throw UnboundVariable(f.name());
      return it->second;
    }
    case Kind::Tensor:
    case Kind::Par: return act_product(act(f.lhs(), env, b), act(f.rhs(), env, b), b);
    case Kind::Lolli:
      return act_product(act(f.lhs(), transposed(env), b).transpose(), act(f.rhs(), env, b), b);
    case Kind::Plus:
    case Kind::With: return act_sum(act(f.lhs(), env, b), act(f.rhs(), env, b), b);
    case Kind::OfCourse:
    case Kind::WhyNot: return act_bags(act(f.operand(), env, b), b);
    case Kind::Neg: return act(f.operand(), transposed(env), b).transpose();
    case Kind::Mu:
    case Kind::Nu: {
      RelationEnv inner = env;
      Relation cur{Carrier(), Carrier()};
      for (std::size_t n = 0; n < b.depth; ++n) {
        inner.insert_or_assign(f.name(), cur);
        cur = act_fold(act(f.body(), inner, b));
      }
      return cur;
    }
  }
  throw InputError("unknown formula kind");
}

/// Whether every free occurrence of x sits under an even number of
/// contravariant positions.
inline bool occurs_covariantly(const Formula& f, const std::string& x, bool positive = true) {
  switch (f.kind()) {
    case Kind::Var: return f.name() != x || positive;
    case Kind::Neg: return occurs_covariantly(f.operand(), x, !positive);
    case Kind::Lolli:
      return occurs_covariantly(f.lhs(), x, !positive) && occurs_covariantly(f.rhs(), x, positive);
    case Kind::Mu:
    case Kind::Nu: return f.name() == x || occurs_covariantly(f.body(), x, positive);
    default:
      if (f.is_constant()) return true;
      if (f.is_unary()) return occurs_covariantly(f.operand(), x, positive);
      return occurs_covariantly(f.lhs(), x, positive) && occurs_covariantly(f.rhs(), x, positive);
  }
}

}  // namespace detail

/// The action of the functor `X ↦ f[X/x]` on the relation r. Other free
/// variables act by identities on their carriers in `env`.
inline Relation functor_on_relations(const Formula& f, const std::string& x, const Relation& r,
                                     const CarrierEnv& env = {}, const Budgets& b = {}) {
  if (!detail::occurs_covariantly(f, x))
    throw PreconditionFailed("variable " + x + " does not occur covariantly in " + print(f));
  RelationEnv renv;
  for (const auto& [name, c] : env)
    if (name != x) renv.emplace(name, Relation::identity(c));
  renv.insert_or_assign(x, r);
  return detail::act(f, renv, b);
}

}  // namespace mull

#endif  // MULL_REL_HPP
