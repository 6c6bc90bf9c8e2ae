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

// Fixpoints on finite lattices and the lifting of initial algebras / final
// coalgebras along indexed posets over finitely presented categories.

#ifndef MULL_FIXPOINT_HPP
#define MULL_FIXPOINT_HPP

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mull/error.hpp"

namespace mull {

// ---------------------------------------------------------------------------
// Kleene iteration

template <class T>
struct Iterated {
  T value;
  std::size_t steps = 0;
};

/// Iterates `op` from `start` until `op(x) == x`. On a finite lattice,
/// starting from bottom (top) with a monotone `op` this yields the least
/// pre-fixpoint (greatest post-fixpoint).
template <class T, class Op, class Eq = std::equal_to<>>
Iterated<T> iterate_to_fixpoint(T start, Op&& op, std::size_t budget, Eq eq = {}) {
  T x = std::move(start);
  for (std::size_t step = 0; step < budget; ++step) {
    T next = op(x);
    if (eq(next, x)) return {std::move(x), step};
    x = std::move(next);
  }
  throw IterationBudgetExceeded("fixpoint iteration did not stabilize within " +
                                std::to_string(budget) + " steps");
}

// ---------------------------------------------------------------------------
// Finite lattices

/// A finite lattice on the elements 0..n-1, given by its order relation.
/// Meets and joins are tabulated at construction.
class FiniteLattice {
 public:
  using Element = std::size_t;

  explicit FiniteLattice(std::vector<std::vector<bool>> leq, std::vector<std::string> names = {})
      : leq_(std::move(leq)), names_(std::move(names)) {
    const std::size_t n = leq_.size();
    if (n == 0) throw InputError("lattice must be nonempty");
    for (const auto& row : leq_)
      if (row.size() != n) throw InputError("order relation must be square");
    for (Element a = 0; a < n; ++a) {
      if (!leq_[a][a]) throw InputError("order is not reflexive");
      for (Element b = 0; b < n; ++b) {
        if (a != b && leq_[a][b] && leq_[b][a]) throw InputError("order is not antisymmetric");
        for (Element c = 0; c < n; ++c)
          if (leq_[a][b] && leq_[b][c] && !leq_[a][c]) throw InputError("order is not transitive");
      }
    }
    meet_.assign(n, std::vector<Element>(n));
    join_.assign(n, std::vector<Element>(n));
    for (Element a = 0; a < n; ++a)
      for (Element b = a; b < n; ++b) {
        meet_[a][b] = meet_[b][a] = bound(a, b, /*lower=*/true);
        join_[a][b] = join_[b][a] = bound(a, b, /*lower=*/false);
      }
    bottom_ = top_ = 0;
    for (Element a = 1; a < n; ++a) {
      bottom_ = meet_[bottom_][a];
      top_ = join_[top_][a];
    }
    if (names_.empty())
      for (Element a = 0; a < n; ++a) names_.push_back(std::to_string(a));
  }

  /// 0 < 1 < ... < n-1.
  static FiniteLattice chain(std::size_t n) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (Element a = 0; a < n; ++a)
      for (Element b = a; b < n; ++b) leq[a][b] = true;
    return FiniteLattice(std::move(leq));
  }

  /// Subsets of {0..k-1}; element i is the subset with bitmask i.
  static FiniteLattice powerset(std::size_t k) {
    std::size_t n = std::size_t{1} << k;
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) leq[a][b] = (a & ~b) == 0;
    return FiniteLattice(std::move(leq));
  }

  std::size_t size() const { return leq_.size(); }
  bool leq(Element a, Element b) const { return leq_[a][b]; }
  Element meet(Element a, Element b) const { return meet_[a][b]; }
  Element join(Element a, Element b) const { return join_[a][b]; }
  Element bottom() const { return bottom_; }
  Element top() const { return top_; }
  const std::string& name(Element a) const { return names_[a]; }

 private:
  Element bound(Element a, Element b, bool lower) const {
    const std::size_t n = size();
    std::optional<Element> best;
    for (Element c = 0; c < n; ++c) {
      bool is_bound = lower ? (leq_[c][a] && leq_[c][b]) : (leq_[a][c] && leq_[b][c]);
      if (!is_bound) continue;
      if (!best || (lower ? leq_[*best][c] : leq_[c][*best])) best = c;
    }
    if (!best) throw InputError("order is not a lattice: missing bound");
    for (Element c = 0; c < n; ++c) {
      bool is_bound = lower ? (leq_[c][a] && leq_[c][b]) : (leq_[a][c] && leq_[b][c]);
      if (is_bound && !(lower ? leq_[c][*best] : leq_[*best][c]))
        throw InputError("order is not a lattice: bounds of " + std::to_string(a) + ", " +
                         std::to_string(b) + " have no extremum");
    }
    return *best;
  }

  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<Element>> meet_, join_;
  Element bottom_ = 0, top_ = 0;
  std::vector<std::string> names_;
};

using Element = FiniteLattice::Element;

/// Whether `table` (a map from `from` to `to`) is order preserving.
inline bool is_monotone(const FiniteLattice& from, const FiniteLattice& to,
                        const std::vector<Element>& table) {
  if (table.size() != from.size()) return false;
  for (Element a = 0; a < from.size(); ++a) {
    if (table[a] >= to.size()) return false;
    for (Element b = 0; b < from.size(); ++b)
      if (from.leq(a, b) && !to.leq(table[a], table[b])) return false;
  }
  return true;
}

/// A monotone endofunction on a finite lattice, stored as a table. The
/// lattice must outlive the operator.
class MonotoneOp {
 public:
  MonotoneOp(const FiniteLattice& lattice, std::vector<Element> table)
      : lattice_(&lattice), table_(std::move(table)) {
    if (!is_monotone(lattice, lattice, table_))
      throw PreconditionFailed("operator is not monotone");
  }

  template <class Fn>
    requires std::invocable<Fn, Element>
  MonotoneOp(const FiniteLattice& lattice, Fn fn)
      : MonotoneOp(lattice, tabulate(lattice, fn)) {}

  Element operator()(Element a) const { return table_[a]; }
  const FiniteLattice& lattice() const { return *lattice_; }
  const std::vector<Element>& table() const { return table_; }

 private:
  template <class Fn>
  static std::vector<Element> tabulate(const FiniteLattice& l, Fn& fn) {
    std::vector<Element> t(l.size());
    for (Element a = 0; a < l.size(); ++a) t[a] = fn(a);
    return t;
  }

  const FiniteLattice* lattice_;
  std::vector<Element> table_;
};

/// Least fixpoint, which is also the least pre-fixpoint.
inline Element lfp(const MonotoneOp& op) {
  const auto& l = op.lattice();
  return iterate_to_fixpoint(l.bottom(), op, l.size() + 1).value;
}

/// Greatest fixpoint, which is also the greatest post-fixpoint.
inline Element gfp(const MonotoneOp& op) {
  const auto& l = op.lattice();
  return iterate_to_fixpoint(l.top(), op, l.size() + 1).value;
}

// ---------------------------------------------------------------------------
// Finitely presented categories and functors

/// A finite category given by explicit arrows and a composition table.
class FinCategory {
 public:
  using Object = std::size_t;
  using Morphism = std::size_t;

  struct Arrow {
    Object dom;
    Object cod;
    std::string name;
  };

  /// `compose[g][f]` is g∘f when cod f = dom g.
  FinCategory(std::size_t objects, std::vector<Arrow> arrows, std::vector<Morphism> identities,
              std::vector<std::vector<Morphism>> compose)
      : objects_(objects), arrows_(std::move(arrows)), ids_(std::move(identities)),
        comp_(std::move(compose)) {
    validate();
  }

  /// One-object category of a finite monoid with unit 0 and `mul[a][b]` = a·b
  /// (read as a∘b).
  static FinCategory from_monoid(const std::vector<std::vector<std::size_t>>& mul,
                                 std::vector<std::string> names = {}) {
    const std::size_t n = mul.size();
    std::vector<Arrow> arrows;
    for (std::size_t i = 0; i < n; ++i)
      arrows.push_back({0, 0, i < names.size() ? names[i] : "m" + std::to_string(i)});
    return FinCategory(1, std::move(arrows), {0}, mul);
  }

  /// Thin category of a preorder: one arrow i -> j iff leq[i][j].
  static FinCategory from_preorder(const std::vector<std::vector<bool>>& leq) {
    const std::size_t n = leq.size();
    std::vector<Arrow> arrows;
    std::vector<std::vector<std::size_t>> index(n, std::vector<std::size_t>(n, kNone));
    for (Object i = 0; i < n; ++i)
      for (Object j = 0; j < n; ++j)
        if (leq[i][j]) {
          index[i][j] = arrows.size();
          arrows.push_back({i, j, std::to_string(i) + "<=" + std::to_string(j)});
        }
    std::vector<Morphism> ids(n);
    for (Object i = 0; i < n; ++i) ids[i] = index[i][i];
    std::vector<std::vector<Morphism>> comp(arrows.size(), std::vector<Morphism>(arrows.size(), kNone));
    for (Morphism g = 0; g < arrows.size(); ++g)
      for (Morphism f = 0; f < arrows.size(); ++f)
        if (arrows[f].cod == arrows[g].dom) comp[g][f] = index[arrows[f].dom][arrows[g].cod];
    return FinCategory(n, std::move(arrows), std::move(ids), std::move(comp));
  }

  std::size_t num_objects() const { return objects_; }
  std::size_t num_morphisms() const { return arrows_.size(); }
  Object dom(Morphism f) const { return arrows_[f].dom; }
  Object cod(Morphism f) const { return arrows_[f].cod; }
  const std::string& name(Morphism f) const { return arrows_[f].name; }
  Morphism id(Object c) const { return ids_[c]; }

  Morphism compose(Morphism g, Morphism f) const {
    if (cod(f) != dom(g)) throw CarrierMismatch("arrows are not composable: " + name(g) + " ∘ " + name(f));
    return comp_[g][f];
  }

  /// Two-sided inverse of f, if any.
  std::optional<Morphism> inverse(Morphism f) const {
    for (Morphism g = 0; g < num_morphisms(); ++g)
      if (dom(g) == cod(f) && cod(g) == dom(f) && compose(g, f) == id(dom(f)) &&
          compose(f, g) == id(cod(f)))
        return g;
    return std::nullopt;
  }

  std::vector<Morphism> hom(Object a, Object b) const {
    std::vector<Morphism> out;
    for (Morphism f = 0; f < num_morphisms(); ++f)
      if (dom(f) == a && cod(f) == b) out.push_back(f);
    return out;
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

 private:
  void validate() const {
    const std::size_t m = arrows_.size();
    if (ids_.size() != objects_) throw InputError("one identity per object required");
    if (comp_.size() != m) throw InputError("composition table has wrong size");
    for (const auto& a : arrows_)
      if (a.dom >= objects_ || a.cod >= objects_) throw InputError("arrow endpoint out of range");
    for (Object c = 0; c < objects_; ++c)
      if (ids_[c] >= m || dom(ids_[c]) != c || cod(ids_[c]) != c)
        throw InputError("identity has wrong endpoints");
    for (Morphism g = 0; g < m; ++g) {
      if (comp_[g].size() != m) throw InputError("composition table has wrong size");
      for (Morphism f = 0; f < m; ++f) {
        if (cod(f) != dom(g)) continue;
        Morphism gf = comp_[g][f];
        if (gf >= m || dom(gf) != dom(f) || cod(gf) != cod(g))
          throw InputError("composite has wrong endpoints");
      }
    }
    for (Morphism f = 0; f < m; ++f)
      if (comp_[f][ids_[dom(f)]] != f || comp_[ids_[cod(f)]][f] != f)
        throw InputError("identity law fails at " + arrows_[f].name);
    for (Morphism f = 0; f < m; ++f)
      for (Morphism g = 0; g < m; ++g) {
        if (cod(f) != dom(g)) continue;
        for (Morphism h = 0; h < m; ++h)
          if (cod(g) == dom(h) && comp_[h][comp_[g][f]] != comp_[comp_[h][g]][f])
            throw InputError("composition is not associative");
      }
  }

  std::size_t objects_;
  std::vector<Arrow> arrows_;
  std::vector<Morphism> ids_;
  std::vector<std::vector<Morphism>> comp_;
};

/// An endofunctor on a FinCategory. The category must outlive the functor.
class FinEndofunctor {
 public:
  using Object = FinCategory::Object;
  using Morphism = FinCategory::Morphism;

  FinEndofunctor(const FinCategory& c, std::vector<Object> objects, std::vector<Morphism> morphisms)
      : c_(&c), obj_(std::move(objects)), mor_(std::move(morphisms)) {
    if (obj_.size() != c.num_objects() || mor_.size() != c.num_morphisms())
      throw InputError("functor tables have wrong size");
    for (Morphism f = 0; f < c.num_morphisms(); ++f) {
      if (mor_[f] >= c.num_morphisms() || c.dom(mor_[f]) != obj_[c.dom(f)] ||
          c.cod(mor_[f]) != obj_[c.cod(f)])
        throw InputError("functor does not respect endpoints at " + c.name(f));
    }
    for (Object o = 0; o < c.num_objects(); ++o)
      if (mor_[c.id(o)] != c.id(obj_[o])) throw InputError("functor does not preserve identities");
    for (Morphism f = 0; f < c.num_morphisms(); ++f)
      for (Morphism g = 0; g < c.num_morphisms(); ++g)
        if (c.cod(f) == c.dom(g) && mor_[c.compose(g, f)] != c.compose(mor_[g], mor_[f]))
          throw InputError("functor does not preserve composition");
  }

  const FinCategory& category() const { return *c_; }
  Object operator()(Object o) const { return obj_[o]; }
  Morphism map(Morphism f) const { return mor_[f]; }

 private:
  const FinCategory* c_;
  std::vector<Object> obj_;
  std::vector<Morphism> mor_;
};

// ---------------------------------------------------------------------------
// Indexed posets

/// What the generic algorithms need from an indexed poset: reindexing
/// `f*: R(d) -> R(c)` along `f: c -> d` and the fiber order.
template <class P>
concept IndexedPoset = requires(const P& p, const typename P::Morphism& f,
                                const typename P::Element& e, const typename P::Object& c) {
  { p.reindex(f, e) } -> std::convertible_to<typename P::Element>;
  { p.leq(c, e, e) } -> std::convertible_to<bool>;
  { p.domain(f) } -> std::convertible_to<typename P::Object>;
};

template <class P>
concept HasExistentials = IndexedPoset<P> && requires(const P& p, const typename P::Morphism& f,
                                                      const typename P::Element& e) {
  { p.exists_along(f, e) } -> std::convertible_to<typename P::Element>;
};

/// `f: (c, R) -> (d, S)` is a morphism of the Grothendieck category, i.e. R <= f*(S).
template <IndexedPoset P>
bool check_lifted_morphism(const P& p, const typename P::Morphism& f,
                           const typename P::Element& r, const typename P::Element& s) {
  return p.leq(p.domain(f), r, p.reindex(f, s));
}

/// Left adjoint to reindexing along f.
template <IndexedPoset P>
typename P::Element exists_along(const P& p, const typename P::Morphism& f,
                                 const typename P::Element& x) {
  if constexpr (HasExistentials<P>) {
    return p.exists_along(f, x);
  } else {
    throw NotSupported("indexed poset has no existential quantification");
  }
}

/// Indexed poset over a FinCategory with finite-lattice fibers, given by
/// reindexing tables. Both the category and this object must outlive any
/// LiftedFunctor built on them.
class FinIndexedPoset {
 public:
  using Object = FinCategory::Object;
  using Morphism = FinCategory::Morphism;
  using Element = mull::Element;

  /// `reindex[f]` maps fiber(cod f) to fiber(dom f).
  FinIndexedPoset(const FinCategory& c, std::vector<FiniteLattice> fibers,
                  std::vector<std::vector<Element>> reindex)
      : c_(&c), fibers_(std::move(fibers)), reindex_(std::move(reindex)) {
    if (fibers_.size() != c.num_objects() || reindex_.size() != c.num_morphisms())
      throw InputError("indexed poset tables have wrong size");
    for (Morphism f = 0; f < c.num_morphisms(); ++f)
      if (!is_monotone(fibers_[c.cod(f)], fibers_[c.dom(f)], reindex_[f]))
        throw InputError("reindexing along " + c.name(f) + " is not monotone");
    for (Object o = 0; o < c.num_objects(); ++o)
      for (Element s = 0; s < fibers_[o].size(); ++s)
        if (reindex_[c.id(o)][s] != s) throw InputError("reindexing along an identity is not the identity");
    for (Morphism f = 0; f < c.num_morphisms(); ++f)
      for (Morphism g = 0; g < c.num_morphisms(); ++g) {
        if (c.cod(f) != c.dom(g)) continue;
        Morphism gf = c.compose(g, f);
        for (Element s = 0; s < fibers_[c.cod(g)].size(); ++s)
          if (reindex_[gf][s] != reindex_[f][reindex_[g][s]])
            throw InputError("reindexing is not functorial");
      }
    existential_ = compute_existentials();
  }

  const FinCategory& category() const { return *c_; }
  const FiniteLattice& fiber(Object c) const { return fibers_[c]; }
  Object domain(Morphism f) const { return c_->dom(f); }
  Element reindex(Morphism f, Element s) const { return reindex_[f][s]; }
  bool leq(Object c, Element a, Element b) const { return fibers_[c].leq(a, b); }
  Element bottom(Object c) const { return fibers_[c].bottom(); }
  Element top(Object c) const { return fibers_[c].top(); }

  /// Every reindexing preserves finite meets, so left adjoints exist.
  bool has_existential_quantification() const { return existential_; }

  Element exists_along(Morphism f, Element x) const {
    if (!existential_) throw NotSupported("indexed poset has no existential quantification");
    // Least Y with x <= f*(Y).
    const FiniteLattice& target = fibers_[c_->cod(f)];
    Element y = target.top();
    for (Element cand = 0; cand < target.size(); ++cand)
      if (leq(domain(f), x, reindex(f, cand))) y = target.meet(y, cand);
    return y;
  }

 private:
  bool compute_existentials() const {
    for (Morphism f = 0; f < c_->num_morphisms(); ++f) {
      const FiniteLattice& from = fibers_[c_->cod(f)];
      const FiniteLattice& to = fibers_[c_->dom(f)];
      if (reindex_[f][from.top()] != to.top()) return false;
      for (Element a = 0; a < from.size(); ++a)
        for (Element b = 0; b < from.size(); ++b)
          if (reindex_[f][from.meet(a, b)] != to.meet(reindex_[f][a], reindex_[f][b])) return false;
    }
    return true;
  }

  const FinCategory* c_;
  std::vector<FiniteLattice> fibers_;
  std::vector<std::vector<Element>> reindex_;
  bool existential_ = false;
};

/// A base endofunctor together with monotone fiber actions
/// `act(c): fiber(c) -> fiber(F c)` satisfying lax naturality
/// `act(c)(f*(S)) <= (F f)*(act(d)(S))`.
class LiftedFunctor {
 public:
  using Object = FinCategory::Object;
  using Morphism = FinCategory::Morphism;

  LiftedFunctor(const FinIndexedPoset& p, FinEndofunctor f, std::vector<std::vector<Element>> action)
      : p_(&p), f_(std::move(f)), action_(std::move(action)) {
    const FinCategory& c = p.category();
    if (&f_.category() != &c) throw InputError("functor lives on a different category");
    if (action_.size() != c.num_objects()) throw InputError("one fiber action per object required");
    for (Object o = 0; o < c.num_objects(); ++o)
      if (!is_monotone(p.fiber(o), p.fiber(f_(o)), action_[o]))
        throw PreconditionFailed("fiber action at object " + std::to_string(o) + " is not monotone");
    if (auto bad = lax_naturality_violation())
      throw PreconditionFailed("fiber action is not laxly natural along " + c.name(*bad));
  }

  const FinIndexedPoset& indexed_poset() const { return *p_; }
  const FinEndofunctor& functor() const { return f_; }
  Element act(Object c, Element r) const { return action_[c][r]; }

  /// First morphism along which lax naturality fails, if any.
  std::optional<Morphism> lax_naturality_violation() const {
    const FinCategory& c = p_->category();
    for (Morphism f = 0; f < c.num_morphisms(); ++f) {
      Object dom = c.dom(f), cod = c.cod(f);
      for (Element s = 0; s < p_->fiber(cod).size(); ++s) {
        Element lhs = act(dom, p_->reindex(f, s));
        Element rhs = p_->reindex(f_.map(f), act(cod, s));
        if (!p_->leq(f_(dom), lhs, rhs)) return f;
      }
    }
    return std::nullopt;
  }

 private:
  const FinIndexedPoset* p_;
  FinEndofunctor f_;
  std::vector<std::vector<Element>> action_;
};

/// An object of the Grothendieck category carrying a (co)algebra structure.
struct LiftedStructure {
  FinCategory::Object object;
  FinCategory::Morphism structure;
  Element fiber_element;
  std::size_t iterations = 0;
};

/// Lifts an invertible algebra `alpha: F a -> a` to the least pre-fixpoint of
/// `(alpha^-1)* ∘ act(a)`. When alpha is initial, so is the result.
inline LiftedStructure lift_initial_algebra(const LiftedFunctor& l, FinCategory::Object a,
                                            FinCategory::Morphism alpha) {
  const FinCategory& c = l.indexed_poset().category();
  const FinEndofunctor& f = l.functor();
  if (c.dom(alpha) != f(a) || c.cod(alpha) != a)
    throw InputError("algebra structure must be an arrow F a -> a");
  auto inv = c.inverse(alpha);
  if (!inv) throw NotInvertible("algebra structure " + c.name(alpha) + " is not invertible");
  const FinIndexedPoset& p = l.indexed_poset();
  auto step = [&](Element s) { return p.reindex(*inv, l.act(a, s)); };
  auto r = iterate_to_fixpoint(p.bottom(a), step, p.fiber(a).size() + 1);
  return {a, alpha, r.value, r.steps};
}

/// Lifts an invertible coalgebra `delta: d -> F d` to the greatest
/// post-fixpoint of `delta* ∘ act(d)`.
inline LiftedStructure lift_final_coalgebra(const LiftedFunctor& l, FinCategory::Object d,
                                            FinCategory::Morphism delta) {
  const FinCategory& c = l.indexed_poset().category();
  const FinEndofunctor& f = l.functor();
  if (c.dom(delta) != d || c.cod(delta) != f(d))
    throw InputError("coalgebra structure must be an arrow d -> F d");
  if (!c.inverse(delta)) throw NotInvertible("coalgebra structure " + c.name(delta) + " is not invertible");
  const FinIndexedPoset& p = l.indexed_poset();
  auto step = [&](Element s) { return p.reindex(delta, l.act(d, s)); };
  auto r = iterate_to_fixpoint(p.top(d), step, p.fiber(d).size() + 1);
  return {d, delta, r.value, r.steps};
}

}  // namespace mull

#endif  // MULL_FIXPOINT_HPP
