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

// Totality spaces: the orthogonality category over Rel with pole {{id}}.
// A point of A is a subset x of A; x ⊥ y iff x meets y. Closed families are
// exactly the up-closed ones, stored as antichains of minimal sets.

#ifndef MULL_TOTALITY_HPP
#define MULL_TOTALITY_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "mull/error.hpp"
#include "mull/fixpoint.hpp"
#include "mull/rel.hpp"
#include "mull/syntax.hpp"

namespace mull {

using Subset = boost::dynamic_bitset<>;

namespace detail {

inline bool subset_less(const Subset& a, const Subset& b) {
  auto ca = a.count(), cb = b.count();
  if (ca != cb) return ca < cb;
  return a < b;
}

/// Minimal elements of a family, in canonical order.
inline std::vector<Subset> minimalize(std::vector<Subset> family) {
  std::sort(family.begin(), family.end(), subset_less);
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<Subset> out;
  for (auto& s : family) {
    bool dominated = false;
    for (const auto& m : out)
      if (m.is_subset_of(s)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(std::move(s));
  }
  return out;
}

/// Minimal transversals (hitting sets) of a family, by Berge's algorithm.
inline std::vector<Subset> transversals(std::size_t n, const std::vector<Subset>& edges) {
  std::vector<Subset> tr{Subset(n)};
  for (const auto& e : edges) {
    std::vector<Subset> next;
    for (const auto& t : tr) {
      if (t.intersects(e)) {
        next.push_back(t);
        continue;
      }
      for (auto v = e.find_first(); v != Subset::npos; v = e.find_next(v)) {
        Subset u = t;
        u.set(v);
        next.push_back(std::move(u));
      }
    }
    tr = minimalize(std::move(next));
    if (tr.empty()) break;
  }
  return tr;
}

}  // namespace detail

/// An up-closed family of subsets of a carrier, i.e. an element of D(A).
class UpFamily {
 public:
  /// Upward closure of `family`, which is also its bipolar closure.
  UpFamily(std::shared_ptr<const Carrier> carrier, std::vector<Subset> family)
      : carrier_(std::move(carrier)), minimal_(detail::minimalize(std::move(family))) {
    for (const auto& s : minimal_)
      if (s.size() != carrier_->size()) throw CarrierMismatch("subset has the wrong width");
  }
  UpFamily(const Carrier& carrier, std::vector<Subset> family)
      : UpFamily(std::make_shared<const Carrier>(carrier), std::move(family)) {}

  /// The empty family.
  static UpFamily bottom(const Carrier& c) { return UpFamily(c, {}); }
  /// All subsets.
  static UpFamily top(const Carrier& c) { return UpFamily(c, {Subset(c.size())}); }

  static UpFamily from_elems(const Carrier& c, const std::vector<std::vector<Elem>>& sets) {
    std::vector<Subset> fam;
    for (const auto& s : sets) fam.push_back(subset_of(c, s));
    return UpFamily(c, std::move(fam));
  }

  static Subset subset_of(const Carrier& c, const std::vector<Elem>& elems) {
    Subset s(c.size());
    for (const auto& e : elems) {
      auto i = c.index_of(e);
      if (!i) throw CarrierMismatch("element " + to_string(e) + " is not in the carrier");
      s.set(*i);
    }
    return s;
  }

  const Carrier& carrier() const { return *carrier_; }
  const std::shared_ptr<const Carrier>& carrier_ptr() const { return carrier_; }
  std::size_t width() const { return carrier_->size(); }
  const std::vector<Subset>& minimal() const { return minimal_; }
  bool is_bottom() const { return minimal_.empty(); }
  bool is_top() const { return minimal_.size() == 1 && minimal_[0].none(); }

  bool contains(const Subset& x) const {
    for (const auto& m : minimal_)
      if (m.is_subset_of(x)) return true;
    return false;
  }

  /// Family inclusion.
  bool leq(const UpFamily& o) const {
    check_same(o);
    for (const auto& m : minimal_)
      if (!o.contains(m)) return false;
    return true;
  }

  UpFamily meet(const UpFamily& o) const {
    check_same(o);
    std::vector<Subset> fam;
    for (const auto& a : minimal_)
      for (const auto& b : o.minimal_) fam.push_back(a | b);
    return UpFamily(carrier_, std::move(fam));
  }

  UpFamily join(const UpFamily& o) const {
    check_same(o);
    std::vector<Subset> fam(minimal_);
    fam.insert(fam.end(), o.minimal_.begin(), o.minimal_.end());
    return UpFamily(carrier_, std::move(fam));
  }

  /// Minimal sets as element lists.
  std::vector<std::vector<Elem>> minimal_elems() const {
    std::vector<std::vector<Elem>> out;
    for (const auto& m : minimal_) {
      std::vector<Elem> s;
      for (auto i = m.find_first(); i != Subset::npos; i = m.find_next(i)) s.push_back((*carrier_)[i]);
      out.push_back(std::move(s));
    }
    return out;
  }

  friend bool operator==(const UpFamily& a, const UpFamily& b) {
    return a.minimal_ == b.minimal_ && (a.carrier_ == b.carrier_ || *a.carrier_ == *b.carrier_);
  }

  void check_same(const UpFamily& o) const {
    if (carrier_ != o.carrier_ && !(*carrier_ == *o.carrier_))
      throw CarrierMismatch("up-families live on different carriers");
  }

 private:
  std::shared_ptr<const Carrier> carrier_;
  std::vector<Subset> minimal_;
};

inline std::string to_string(const UpFamily& f) {
  if (f.is_bottom()) return "{}";
  std::string s = "up{";
  bool first = true;
  for (const auto& m : f.minimal_elems()) {
    s += first ? "{" : ", {";
    first = false;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + to_string(m[i]);
    s += "}";
  }
  return s + "}";
}

/// X^⊥ = { y : y meets every x in X }.
inline UpFamily orthogonal(const UpFamily& x, std::size_t cap = Budgets{}.max_orthogonal) {
  if (x.width() > cap)
    throw CarrierTooLarge("orthogonal on a carrier of size " + std::to_string(x.width()) + " exceeds the cap of " +
                          std::to_string(cap));
  return UpFamily(x.carrier_ptr(), detail::transversals(x.width(), x.minimal()));
}

/// X^⊥⊥ for an arbitrary family; on a finite carrier this is the upward closure.
inline UpFamily biclosure(const Carrier& c, std::vector<Subset> family) { return UpFamily(c, std::move(family)); }

/// f*(Y) = { x ⊆ A : f(x) ∈ Y } for a relation f: A -> B.
inline UpFamily reindex(const Relation& f, const UpFamily& y, std::size_t cap = Budgets{}.max_orthogonal) {
  if (!(f.target() == y.carrier())) throw CarrierMismatch("reindex: relation target differs from the family carrier");
  const std::size_t n = f.source().size();
  std::vector<Subset> pre(f.target().size(), Subset(n));
  for (auto [a, b] : f.pairs()) pre[b].set(a);
  std::vector<Subset> out;
  for (const auto& m : y.minimal()) {
    std::vector<Subset> edges;
    bool blocked = false;
    for (auto b = m.find_first(); b != Subset::npos; b = m.find_next(b)) {
      if (pre[b].none()) blocked = true;
      edges.push_back(pre[b]);
    }
    if (blocked) continue;
    if (edges.size() > 1 && n > cap)
      throw CarrierTooLarge("reindex on a carrier of size " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(cap));
    auto tr = detail::transversals(n, detail::minimalize(edges));
    out.insert(out.end(), tr.begin(), tr.end());
  }
  return UpFamily(std::make_shared<const Carrier>(f.source()), std::move(out));
}

inline Subset image(const Relation& f, const Subset& x) {
  Subset out(f.target().size());
  for (auto [a, b] : f.pairs())
    if (x.test(a)) out.set(b);
  return out;
}

/// Left adjoint of reindex: biclosure of the direct image.
inline UpFamily exists_along(const Relation& f, const UpFamily& x) {
  if (!(f.source() == x.carrier())) throw CarrierMismatch("exists_along: relation source differs from the family carrier");
  std::vector<Subset> out;
  for (const auto& m : x.minimal()) out.push_back(image(f, m));
  return UpFamily(f.target(), std::move(out));
}

struct TotalitySpace {
  Carrier carrier;
  UpFamily total;
  /// Whether every fixpoint's minimal sets below depth k-1 agree with depth
  /// k-1. Growth of the carrier itself is reported by carrier.stabilized().
  bool stabilized = true;
};

/// f is a morphism (A, X) -> (B, Y) iff the image of every member of X is in Y.
/// Checking minimal members suffices since images are monotone and Y is up-closed.
inline bool check_total_morphism(const Relation& f, const TotalitySpace& a, const TotalitySpace& b) {
  if (!(f.source() == a.carrier) || !(f.target() == b.carrier))
    throw CarrierMismatch("check_total_morphism: relation does not match the spaces");
  for (const auto& m : a.total.minimal())
    if (!b.total.contains(image(f, m))) return false;
  return true;
}

/// x ⊥ u for a point x: 1 -> A and a co-point u: A -> 1, i.e. u ∘ x = id.
inline bool point_orthogonal(const Relation& x, const Relation& u) {
  return compose_rel(x, u).size() == 1;
}

/// The indexed poset of totality candidates over Rel.
struct TotalityFibration {
  using Object = Carrier;
  using Morphism = Relation;
  using Element = UpFamily;

  std::size_t cap = Budgets{}.max_orthogonal;

  UpFamily reindex(const Relation& f, const UpFamily& y) const { return mull::reindex(f, y, cap); }
  bool leq(const Carrier&, const UpFamily& a, const UpFamily& b) const { return a.leq(b); }
  Carrier domain(const Relation& f) const { return f.source(); }
  UpFamily exists_along(const Relation& f, const UpFamily& x) const { return mull::exists_along(f, x); }
};

// ---------------------------------------------------------------------------
// Interpretation

using TotalityEnv = std::map<std::string, TotalitySpace>;

namespace detail {

inline TotalitySpace tensor_space(const TotalitySpace& a, const TotalitySpace& b, const Budgets& bud) {
  Carrier c = product(a.carrier, b.carrier, bud);
  const std::size_t nb = b.carrier.size();
  std::vector<Subset> fam;
  for (const auto& x : a.total.minimal())
    for (const auto& y : b.total.minimal()) {
      Subset s(c.size());
      for (auto i = x.find_first(); i != Subset::npos; i = x.find_next(i))
        for (auto j = y.find_first(); j != Subset::npos; j = y.find_next(j)) s.set(i * nb + j);
      fam.push_back(std::move(s));
    }
  UpFamily t(c, std::move(fam));
  return {std::move(c), std::move(t), a.stabilized && b.stabilized};
}

inline Subset inject(const Subset& x, std::size_t offset, std::size_t width) {
  Subset s(width);
  for (auto i = x.find_first(); i != Subset::npos; i = x.find_next(i)) s.set(i + offset);
  return s;
}

inline TotalitySpace negate(const TotalitySpace& a, const Budgets& bud) {
  return {a.carrier, orthogonal(a.total, bud.max_orthogonal), a.stabilized};
}

inline TotalitySpace bang_space(const TotalitySpace& a, const Budgets& bud) {
  Carrier c = bags(a.carrier, bud);
  std::vector<Subset> fam;
  for (const auto& x : a.total.minimal()) {
    // All bags whose members lie in x.
    Subset s(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      bool inside = true;
      for (const auto& m : c[i].children())
        if (!x.test(*a.carrier.index_of(m))) {
          inside = false;
          break;
        }
      if (inside) s.set(i);
    }
    fam.push_back(std::move(s));
  }
  UpFamily t(c, std::move(fam));
  return {std::move(c), std::move(t), a.stabilized};
}

/// Minimal sets restricted to elements of fold depth below `bound`.
inline std::set<std::vector<Elem>> restrict_to_depth(const UpFamily& f, std::size_t bound) {
  std::set<std::vector<Elem>> out;
  for (const auto& m : f.minimal_elems())
    if (std::all_of(m.begin(), m.end(), [&](const Elem& e) { return e.fold_depth() < bound; })) out.insert(m);
  return out;
}

inline TotalitySpace interpret(const Formula& f, const TotalityEnv& env, const Budgets& b);

/// The fixpoint of S ↦ ι*(fold(T_body[x ↦ (X_k, S)])) on D(X_k), where X_k is
/// the depth-k carrier and ι: X_k -> X_{k+1} the inclusion.
inline TotalitySpace fixpoint_space(const Formula& f, const TotalityEnv& env, const Budgets& b) {
  CarrierEnv cenv;
  for (const auto& [name, sp] : env) cenv.emplace(name, sp.carrier);
  Carrier xk = interpret_carrier(f, cenv, b);
  auto xk_ptr = std::make_shared<const Carrier>(xk);
  TotalityEnv inner = env;
  auto step = [&](const UpFamily& s) {
    inner.insert_or_assign(f.name(), TotalitySpace{xk, s, true});
    TotalitySpace body = interpret(f.body(), inner, b);
    Carrier next = folded(body.carrier);
    UpFamily unfolded(next, body.total.minimal());
    std::vector<Relation::Pair> incl;
    for (std::size_t i = 0; i < xk.size(); ++i) incl.emplace_back(i, *next.index_of(xk[i]));
    UpFamily r = mull::reindex(Relation(xk, next, std::move(incl)), unfolded, b.max_orthogonal);
    return UpFamily(xk_ptr, r.minimal());
  };
  UpFamily start = f.kind() == Kind::Mu ? UpFamily(xk_ptr, {}) : UpFamily(xk_ptr, {Subset(xk.size())});
  UpFamily result = iterate_to_fixpoint(start, step, b.max_iterations).value;
  // Inner flags come from one more evaluation of the body at the fixpoint.
  inner.insert_or_assign(f.name(), TotalitySpace{xk, result, true});
  bool inner_stable = interpret(f.body(), inner, b).stabilized;
  return {xk, result, inner_stable};
}

inline TotalitySpace interpret(const Formula& f, const TotalityEnv& env, const Budgets& b) {
  switch (f.kind()) {
    case Kind::One:
    case Kind::Bot: {
      Carrier c = Carrier::unit();
      Subset s(1);
      s.set(0);
      return {c, UpFamily(c, {s}), true};
    }
    case Kind::Zero: return {Carrier(), UpFamily::bottom(Carrier()), true};
    case Kind::Top: return {Carrier(), UpFamily::top(Carrier()), true};
    case Kind::Var: {
      auto it = env.find(f.name());
      if (it == env.end()) throw UnboundVariable(f.name());
      return it->second;
    }
    case Kind::Tensor: return tensor_space(interpret(f.lhs(), env, b), interpret(f.rhs(), env, b), b);
    case Kind::Par: {
      TotalitySpace l = interpret(f.lhs(), env, b), r = interpret(f.rhs(), env, b);
      return negate(tensor_space(negate(l, b), negate(r, b), b), b);
    }
    case Kind::Plus:
    case Kind::With: {
      TotalitySpace l = interpret(f.lhs(), env, b), r = interpret(f.rhs(), env, b);
      Carrier c = sum(l.carrier, r.carrier, b);
      const std::size_t off = l.carrier.size();
      std::vector<Subset> fam;
      if (f.kind() == Kind::Plus) {
        for (const auto& x : l.total.minimal()) fam.push_back(inject(x, 0, c.size()));
        for (const auto& y : r.total.minimal()) fam.push_back(inject(y, off, c.size()));
      } else {
        for (const auto& x : l.total.minimal())
          for (const auto& y : r.total.minimal()) fam.push_back(inject(x, 0, c.size()) | inject(y, off, c.size()));
      }
      UpFamily t(c, std::move(fam));
      return {std::move(c), std::move(t), l.stabilized && r.stabilized};
    }
    case Kind::OfCourse: return bang_space(interpret(f.operand(), env, b), b);
    case Kind::WhyNot: return negate(bang_space(negate(interpret(f.operand(), env, b), b), b), b);
    case Kind::Neg: return negate(interpret(f.operand(), env, b), b);
    case Kind::Lolli: throw NotSupported("the totality model does not interpret -o; use ~a | b");
    case Kind::Mu:
    case Kind::Nu: {
      TotalitySpace at_k = fixpoint_space(f, env, b);
      if (b.depth == 0) return {at_k.carrier, at_k.total, false};
      Budgets prev = b;
      prev.depth = b.depth - 1;
      TotalitySpace at_prev = fixpoint_space(f, env, prev);
      bool same = restrict_to_depth(at_k.total, b.depth - 1) == restrict_to_depth(at_prev.total, b.depth - 1);
      return {at_k.carrier, at_k.total, at_k.stabilized && same};
    }
  }
  throw InputError("unknown formula kind");
}

}  // namespace detail

/// Interprets f as a totality space. μ and ν are the least and greatest
/// fixpoints on the depth-k carrier; `stabilized` reports whether the minimal
/// sets of depth below k-1 agree with the depth k-1 result.
inline TotalitySpace interpret_totality(const Formula& f, const TotalityEnv& env = {}, const Budgets& b = {}) {
  return detail::interpret(f, env, b);
}

}  // namespace mull

#endif  // MULL_TOTALITY_HPP
