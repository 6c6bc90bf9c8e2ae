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

// Synthetic lifting instances and an enumeration oracle for initiality and
// finality in the Grothendieck category. The oracle only uses tables, never
// the library's fixpoint routines.

#ifndef MULL_TESTS_LIFTING_HPP
#define MULL_TESTS_LIFTING_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mull/fixpoint.hpp"

namespace mull::testing {

using Object = FinCategory::Object;
using Morphism = FinCategory::Morphism;
using Action = std::vector<std::vector<Element>>;

/// All monotone maps between two finite lattices, by backtracking over
/// elements in index order.
inline std::vector<std::vector<Element>> monotone_maps(const FiniteLattice& from, const FiniteLattice& to) {
  std::vector<std::vector<Element>> out;
  std::vector<Element> cur(from.size());
  std::function<void(Element)> go = [&](Element a) {
    if (a == from.size()) {
      out.push_back(cur);
      return;
    }
    for (Element v = 0; v < to.size(); ++v) {
      bool ok = true;
      for (Element b = 0; b < a && ok; ++b) {
        if (from.leq(b, a) && !to.leq(cur[b], v)) ok = false;
        if (from.leq(a, b) && !to.leq(v, cur[b])) ok = false;
      }
      if (!ok) continue;
      cur[a] = v;
      go(a + 1);
    }
  };
  go(0);
  return out;
}

/// Oracle-side lax naturality check.
inline bool laxly_natural(const FinIndexedPoset& p, const FinEndofunctor& f, const Action& act) {
  const FinCategory& c = p.category();
  for (Morphism m = 0; m < c.num_morphisms(); ++m)
    for (Element s = 0; s < p.fiber(c.cod(m)).size(); ++s) {
      Element lhs = act[c.dom(m)][p.reindex(m, s)];
      Element rhs = p.reindex(f.map(m), act[c.cod(m)][s]);
      if (!p.fiber(f(c.dom(m))).leq(lhs, rhs)) return false;
    }
  return true;
}

struct LiftingInstance {
  std::string name;
  std::unique_ptr<FinCategory> category;
  std::unique_ptr<FinIndexedPoset> poset;
  std::unique_ptr<FinEndofunctor> functor;
  std::vector<Action> actions;  // every candidate fiber action, lax or not
  Object a = 0;
  Morphism alpha = 0;
  Object d = 0;
  Morphism delta = 0;
};

/// Base homomorphisms u: a -> d of algebras, u∘alpha = delta∘F(u).
inline std::vector<Morphism> algebra_homs(const FinEndofunctor& f, Object a, Morphism alpha, Object d,
                                          Morphism delta) {
  const FinCategory& c = f.category();
  std::vector<Morphism> out;
  for (Morphism u : c.hom(a, d))
    if (c.compose(u, alpha) == c.compose(delta, f.map(u))) out.push_back(u);
  return out;
}

/// Base homomorphisms u: d -> a of coalgebras, delta∘u = F(u)∘gamma.
inline std::vector<Morphism> coalgebra_homs(const FinEndofunctor& f, Object d, Morphism gamma, Object a,
                                            Morphism delta) {
  const FinCategory& c = f.category();
  std::vector<Morphism> out;
  for (Morphism u : c.hom(d, a))
    if (c.compose(delta, u) == c.compose(f.map(u), gamma)) out.push_back(u);
  return out;
}

inline bool base_initial(const FinEndofunctor& f, Object a, Morphism alpha) {
  const FinCategory& c = f.category();
  for (Object d = 0; d < c.num_objects(); ++d)
    for (Morphism delta : c.hom(f(d), d))
      if (algebra_homs(f, a, alpha, d, delta).size() != 1) return false;
  return true;
}

inline bool base_final(const FinEndofunctor& f, Object a, Morphism delta) {
  const FinCategory& c = f.category();
  for (Object d = 0; d < c.num_objects(); ++d)
    for (Morphism gamma : c.hom(d, f(d)))
      if (coalgebra_homs(f, d, gamma, a, delta).size() != 1) return false;
  return true;
}

/// Every R in fiber(a) such that (a, R, alpha) is a lifted algebra through
/// which every lifted algebra receives a (necessarily unique) homomorphism.
inline std::vector<Element> initial_lifted_algebras(const FinIndexedPoset& p, const FinEndofunctor& f,
                                                    const Action& act, Object a, Morphism alpha) {
  const FinCategory& c = p.category();
  std::vector<Element> out;
  for (Element r = 0; r < p.fiber(a).size(); ++r) {
    // F̂(a, R) -> (a, R) along alpha.
    if (!p.leq(f(a), act[a][r], p.reindex(alpha, r))) continue;
    bool initial = true;
    for (Object d = 0; d < c.num_objects() && initial; ++d)
      for (Morphism delta : c.hom(f(d), d)) {
        for (Element s = 0; s < p.fiber(d).size() && initial; ++s) {
          if (!p.leq(f(d), act[d][s], p.reindex(delta, s))) continue;
          auto homs = algebra_homs(f, a, alpha, d, delta);
          if (homs.size() != 1 || !p.leq(a, r, p.reindex(homs[0], s))) initial = false;
        }
        if (!initial) break;
      }
    if (initial) out.push_back(r);
  }
  return out;
}

/// Dual of initial_lifted_algebras.
inline std::vector<Element> final_lifted_coalgebras(const FinIndexedPoset& p, const FinEndofunctor& f,
                                                    const Action& act, Object a, Morphism delta) {
  const FinCategory& c = p.category();
  std::vector<Element> out;
  for (Element r = 0; r < p.fiber(a).size(); ++r) {
    // (a, R) -> F̂(a, R) along delta.
    if (!p.leq(a, r, p.reindex(delta, act[a][r]))) continue;
    bool final = true;
    for (Object d = 0; d < c.num_objects() && final; ++d)
      for (Morphism gamma : c.hom(d, f(d))) {
        for (Element s = 0; s < p.fiber(d).size() && final; ++s) {
          if (!p.leq(d, s, p.reindex(gamma, act[d][s]))) continue;
          auto homs = coalgebra_homs(f, d, gamma, a, delta);
          if (homs.size() != 1 || !p.leq(d, s, p.reindex(homs[0], r))) final = false;
        }
        if (!final) break;
      }
    if (final) out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instances

inline std::vector<std::vector<std::size_t>> cyclic_table(std::size_t n) {
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return t;
}

/// Z/3 as a one-object category, F sending every arrow to the identity,
/// fiber a 4-chain reindexed trivially; every monotone fiber action.
inline LiftingInstance cyclic_trivial() {
  LiftingInstance in;
  in.name = "Z3-trivial-chain4";
  in.category = std::make_unique<FinCategory>(FinCategory::from_monoid(cyclic_table(3), {"e", "g", "gg"}));
  const auto& c = *in.category;
  std::vector<std::vector<Element>> re(3, std::vector<Element>{0, 1, 2, 3});
  in.poset = std::make_unique<FinIndexedPoset>(c, std::vector<FiniteLattice>{FiniteLattice::chain(4)}, re);
  in.functor = std::make_unique<FinEndofunctor>(c, std::vector<Object>{0}, std::vector<Morphism>{0, 0, 0});
  for (auto& m : monotone_maps(in.poset->fiber(0), in.poset->fiber(0))) in.actions.push_back({m});
  in.a = in.d = 0;
  in.alpha = in.delta = 0;
  return in;
}

/// The preorder 0 < 1 < 2 with F(i) = min(i + 1, 2). fiber(i) is the powerset
/// of {0..i}, reindexed by restriction. Actions are S ↦ base_i ∪ ((S + 1) ∩ [0, F i])
/// for every choice of base_i.
inline LiftingInstance chain_successor() {
  LiftingInstance in;
  in.name = "chain3-successor-powerset";
  std::vector<std::vector<bool>> leq(3, std::vector<bool>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) leq[i][j] = true;
  in.category = std::make_unique<FinCategory>(FinCategory::from_preorder(leq));
  const auto& c = *in.category;
  std::vector<FiniteLattice> fibers;
  for (int i = 0; i < 3; ++i) fibers.push_back(FiniteLattice::powerset(i + 1));
  std::vector<std::vector<Element>> re(c.num_morphisms());
  for (Morphism m = 0; m < c.num_morphisms(); ++m) {
    Element mask = (Element{1} << (c.dom(m) + 1)) - 1;
    for (Element s = 0; s < fibers[c.cod(m)].size(); ++s) re[m].push_back(s & mask);
  }
  in.poset = std::make_unique<FinIndexedPoset>(c, std::move(fibers), re);
  auto succ = [](Object i) { return std::min<Object>(i + 1, 2); };
  std::vector<Object> obj{succ(0), succ(1), succ(2)};
  std::vector<Morphism> mor(c.num_morphisms());
  for (Morphism m = 0; m < c.num_morphisms(); ++m) {
    auto h = c.hom(succ(c.dom(m)), succ(c.cod(m)));
    mor[m] = h.at(0);
  }
  in.functor = std::make_unique<FinEndofunctor>(c, obj, mor);
  const auto& p = *in.poset;
  for (Element b0 = 0; b0 < p.fiber(succ(0)).size(); ++b0)
    for (Element b1 = 0; b1 < p.fiber(succ(1)).size(); ++b1)
      for (Element b2 = 0; b2 < p.fiber(succ(2)).size(); ++b2) {
        Element base[3] = {b0, b1, b2};
        Action act(3);
        for (Object i = 0; i < 3; ++i) {
          Element mask = (Element{1} << (succ(i) + 1)) - 1;
          for (Element s = 0; s < p.fiber(i).size(); ++s) act[i].push_back(base[i] | ((s << 1) & mask));
        }
        in.actions.push_back(std::move(act));
      }
  in.a = in.d = 2;
  in.alpha = in.delta = c.id(2);
  return in;
}

/// Two isomorphic objects a, b with phi: a -> b and psi = phi^-1; F swaps them.
/// Both fibers are the Boolean square, reindexed by the swap automorphism.
/// Actions are all pairs of monotone maps.
inline LiftingInstance swapped_pair() {
  LiftingInstance in;
  in.name = "iso-pair-swap-B2";
  // Arrows: 0 = id_a, 1 = id_b, 2 = phi, 3 = psi.
  std::vector<FinCategory::Arrow> arrows{{0, 0, "id_a"}, {1, 1, "id_b"}, {0, 1, "phi"}, {1, 0, "psi"}};
  const auto n = FinCategory::kNone;
  std::vector<std::vector<Morphism>> comp{
      // g = id_a: id_a∘id_a, -, -, id_a∘psi
      {0, n, n, 3},
      // g = id_b
      {n, 1, 2, n},
      // g = phi: phi∘id_a = phi, phi∘psi = id_b
      {2, n, n, 1},
      // g = psi: psi∘id_b = psi, psi∘phi = id_a
      {n, 3, 0, n},
  };
  in.category = std::make_unique<FinCategory>(2, arrows, std::vector<Morphism>{0, 1}, comp);
  const auto& c = *in.category;
  std::vector<Element> ident{0, 1, 2, 3}, swap{0, 2, 1, 3};
  in.poset = std::make_unique<FinIndexedPoset>(
      c, std::vector<FiniteLattice>{FiniteLattice::powerset(2), FiniteLattice::powerset(2)},
      std::vector<std::vector<Element>>{ident, ident, swap, swap});
  in.functor = std::make_unique<FinEndofunctor>(c, std::vector<Object>{1, 0}, std::vector<Morphism>{1, 0, 3, 2});
  auto maps = monotone_maps(in.poset->fiber(0), in.poset->fiber(1));
  for (const auto& fa : maps)
    for (const auto& fb : maps) in.actions.push_back({fa, fb});
  in.a = in.d = 0;
  in.alpha = 3;  // psi: F a = b -> a
  in.delta = 2;  // phi: a -> F a = b
  return in;
}

/// Z/3 with F the inversion automorphism; fiber B3 with generator g acting
/// by rotating the three atoms. Every monotone fiber action.
inline LiftingInstance cyclic_inversion() {
  LiftingInstance in;
  in.name = "Z3-inversion-B3";
  in.category = std::make_unique<FinCategory>(FinCategory::from_monoid(cyclic_table(3), {"e", "g", "gg"}));
  const auto& c = *in.category;
  auto rotate = [](Element s, unsigned k) {
    Element r = s;
    for (unsigned i = 0; i < k; ++i) r = ((r << 1) | (r >> 2)) & 7u;
    return r;
  };
  std::vector<std::vector<Element>> re(3);
  for (unsigned g = 0; g < 3; ++g)
    for (Element s = 0; s < 8; ++s) re[g].push_back(rotate(s, g));
  in.poset = std::make_unique<FinIndexedPoset>(c, std::vector<FiniteLattice>{FiniteLattice::powerset(3)}, re);
  in.functor = std::make_unique<FinEndofunctor>(c, std::vector<Object>{0}, std::vector<Morphism>{0, 2, 1});
  for (auto& m : monotone_maps(in.poset->fiber(0), in.poset->fiber(0))) in.actions.push_back({m});
  in.a = in.d = 0;
  in.alpha = 1;
  in.delta = 2;
  return in;
}

inline std::vector<LiftingInstance> all_lifting_instances() {
  std::vector<LiftingInstance> v;
  v.push_back(cyclic_trivial());
  v.push_back(chain_successor());
  v.push_back(swapped_pair());
  v.push_back(cyclic_inversion());
  return v;
}

}  // namespace mull::testing

#endif  // MULL_TESTS_LIFTING_HPP
