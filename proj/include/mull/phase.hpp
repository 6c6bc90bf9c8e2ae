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

// Finite phase semantics. Subsets of the monoid are bitmasks, so spaces have
// at most 64 elements.

#ifndef MULL_PHASE_HPP
#define MULL_PHASE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mull/error.hpp"
#include "mull/fixpoint.hpp"
#include "mull/syntax.hpp"

namespace mull {

using PhaseSet = std::uint64_t;

/// Loading a space that is not a commutative monoid.
class PhaseSpaceError : public InputError {
 public:
  explicit PhaseSpaceError(std::vector<std::string> violations)
      : InputError(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "not a commutative monoid:";
    for (const auto& x : v) s += "\n  " + x;
    return s;
  }
  std::vector<std::string> violations_;
};

/// A finite commutative monoid with a pole.
class PhaseSpace {
 public:
  using Index = std::size_t;

  PhaseSpace(std::vector<std::string> names, Index unit, std::vector<std::vector<Index>> table, PhaseSet pole)
      : names_(std::move(names)), unit_(unit), table_(std::move(table)), pole_(pole) {
    auto v = violations();
    if (!v.empty()) throw PhaseSpaceError(std::move(v));
  }

  std::size_t size() const { return names_.size(); }
  Index unit() const { return unit_; }
  Index mul(Index a, Index b) const { return table_[a][b]; }
  PhaseSet pole() const { return pole_; }
  PhaseSet all() const { return size() == 64 ? ~PhaseSet{0} : (PhaseSet{1} << size()) - 1; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<Index>>& table() const { return table_; }

  std::optional<Index> find(const std::string& name) const {
    for (Index i = 0; i < size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  /// X^⊥ = { y : x·y ∈ pole for every x ∈ X }.
  PhaseSet orthogonal(PhaseSet x) const {
    PhaseSet out = 0;
    for (Index y = 0; y < size(); ++y) {
      bool ok = true;
      for (Index a = 0; a < size() && ok; ++a)
        if ((x >> a & 1) && !(pole_ >> table_[a][y] & 1)) ok = false;
      if (ok) out |= PhaseSet{1} << y;
    }
    return out;
  }

  PhaseSet closure(PhaseSet x) const { return orthogonal(orthogonal(x)); }
  bool is_fact(PhaseSet x) const { return closure(x) == x; }

  /// { a·b : a ∈ X, b ∈ Y }.
  PhaseSet product(PhaseSet x, PhaseSet y) const {
    PhaseSet out = 0;
    for (Index a = 0; a < size(); ++a)
      if (x >> a & 1)
        for (Index b = 0; b < size(); ++b)
          if (y >> b & 1) out |= PhaseSet{1} << table_[a][b];
    return out;
  }

  PhaseSpace with_pole(PhaseSet pole) const {
    PhaseSpace s = *this;
    s.pole_ = pole & all();
    return s;
  }

 private:
  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    const std::size_t n = names_.size();
    if (n == 0) return {"the monoid is empty"};
    if (n > 64) return {"at most 64 elements are supported"};
    if (unit_ >= n) return {"unit is not an element"};
    if (table_.size() != n) return {"table must have one row per element"};
    for (const auto& row : table_) {
      if (row.size() != n) return {"table rows must have one entry per element"};
      for (auto x : row)
        if (x >= n) return {"table entry out of range"};
    }
    if (pole_ >> n && n < 64) v.push_back("pole mentions unknown elements");
    for (Index a = 0; a < n; ++a) {
      if (table_[unit_][a] != a || table_[a][unit_] != a)
        v.push_back("unit law fails at " + names_[a]);
      for (Index b = a + 1; b < n; ++b)
        if (table_[a][b] != table_[b][a])
          v.push_back("not commutative: " + names_[a] + "·" + names_[b] + " = " + names_[table_[a][b]] + " but " +
                      names_[b] + "·" + names_[a] + " = " + names_[table_[b][a]]);
    }
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) {
          Index l = table_[table_[a][b]][c], r = table_[a][table_[b][c]];
          if (l != r)
            v.push_back("not associative: (" + names_[a] + "·" + names_[b] + ")·" + names_[c] + " = " + names_[l] +
                        " but " + names_[a] + "·(" + names_[b] + "·" + names_[c] + ") = " + names_[r]);
        }
    return v;
  }

  std::vector<std::string> names_;
  Index unit_;
  std::vector<std::vector<Index>> table_;
  PhaseSet pole_;
};

inline PhaseSet fact_closure(const PhaseSpace& s, PhaseSet x) {
  if (x & ~s.all()) throw InputError("fact_closure: subset mentions unknown elements");
  return s.closure(x);
}

inline std::string set_to_string(const PhaseSpace& s, PhaseSet x) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (x >> i & 1) {
      out += (first ? "" : ", ") + s.names()[i];
      first = false;
    }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Space files
//
//   elements e a
//   unit e
//   row e : e a
//   row a : a a
//   pole a

inline PhaseSpace parse_phase_space(const std::string& text) {
  std::vector<std::string> names;
  std::optional<std::string> unit;
  std::map<std::string, std::vector<std::string>> rows;
  std::optional<std::vector<std::string>> pole;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError("space file line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    const std::string kw = toks[0];
    toks.erase(toks.begin());
    if (kw == "elements") {
      if (!names.empty()) fail("duplicate elements line");
      names = toks;
      for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (names[i] == names[j]) fail("duplicate element " + names[i]);
    } else if (kw == "unit") {
      if (toks.size() != 1) fail("unit takes one element");
      unit = toks[0];
    } else if (kw == "row") {
      if (toks.size() < 2 || toks[1] != ":") fail("expected 'row NAME : PRODUCTS'");
      std::string name = toks[0];
      toks.erase(toks.begin(), toks.begin() + 2);
      if (rows.count(name)) fail("duplicate row for " + name);
      rows[name] = toks;
    } else if (kw == "pole") {
      if (pole) fail("duplicate pole line");
      pole = toks;
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (names.empty()) throw InputError("space file: missing elements line");
  if (!unit) throw InputError("space file: missing unit line");
  if (!pole) throw InputError("space file: missing pole line");
  auto index = [&](const std::string& n) -> std::size_t {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return i;
    throw InputError("space file: unknown element " + n);
  };
  std::vector<std::vector<std::size_t>> table(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = rows.find(names[i]);
    if (it == rows.end()) throw InputError("space file: missing row for " + names[i]);
    if (it->second.size() != names.size())
      throw InputError("space file: row " + names[i] + " has " + std::to_string(it->second.size()) +
                       " entries, expected " + std::to_string(names.size()));
    for (const auto& p : it->second) table[i].push_back(index(p));
  }
  for (const auto& [name, _] : rows) index(name);
  if (names.size() > 64) throw InputError("space file: at most 64 elements are supported");
  PhaseSet p = 0;
  for (const auto& n : *pole) p |= PhaseSet{1} << index(n);
  return PhaseSpace(names, index(*unit), std::move(table), p);
}

inline std::string to_text(const PhaseSpace& s) {
  std::string out = "elements";
  for (const auto& n : s.names()) out += " " + n;
  out += "\nunit " + s.names()[s.unit()] + "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += "row " + s.names()[i] + " :";
    for (std::size_t j = 0; j < s.size(); ++j) out += " " + s.names()[s.mul(i, j)];
    out += "\n";
  }
  out += "pole";
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.pole() >> i & 1) out += " " + s.names()[i];
  return out + "\n";
}

// ---------------------------------------------------------------------------
// Interpretation

using PhaseEnv = std::map<std::string, PhaseSet>;

namespace detail {

inline PhaseSet idempotents_of_one(const PhaseSpace& s) {
  PhaseSet one = s.closure(PhaseSet{1} << s.unit());
  PhaseSet out = 0;
  for (std::size_t x = 0; x < s.size(); ++x)
    if ((one >> x & 1) && s.mul(x, x) == x) out |= PhaseSet{1} << x;
  return out;
}

inline PhaseSet phase(const PhaseSpace& s, const Formula& f, PhaseEnv& env) {
  switch (f.kind()) {
    case Kind::One: return s.closure(PhaseSet{1} << s.unit());
    case Kind::Bot: return s.orthogonal(PhaseSet{1} << s.unit());
    case Kind::Top: return s.all();
    case Kind::Zero: return s.closure(0);
    case Kind::Var: {
      auto it = env.find(f.name());
      if (it == env.end()) throw UnboundVariable(f.name());
      return it->second;
    }
    case Kind::Tensor: return s.closure(s.product(phase(s, f.lhs(), env), phase(s, f.rhs(), env)));
    case Kind::Par:
      return s.orthogonal(s.product(s.orthogonal(phase(s, f.lhs(), env)), s.orthogonal(phase(s, f.rhs(), env))));
    case Kind::Lolli: return s.orthogonal(s.product(phase(s, f.lhs(), env), s.orthogonal(phase(s, f.rhs(), env))));
    case Kind::Plus: return s.closure(phase(s, f.lhs(), env) | phase(s, f.rhs(), env));
    case Kind::With: return phase(s, f.lhs(), env) & phase(s, f.rhs(), env);
    case Kind::Neg: return s.orthogonal(phase(s, f.operand(), env));
    case Kind::OfCourse: return s.closure(phase(s, f.operand(), env) & idempotents_of_one(s));
    case Kind::WhyNot:
      return s.orthogonal(s.closure(s.orthogonal(phase(s, f.operand(), env)) & idempotents_of_one(s)));
    case Kind::Mu:
    case Kind::Nu: {
      std::optional<PhaseSet> saved;
      if (auto it = env.find(f.name()); it != env.end()) saved = it->second;
      auto step = [&](PhaseSet x) {
        env[f.name()] = x;
        return phase(s, f.body(), env);
      };
      PhaseSet start = f.kind() == Kind::Mu ? s.closure(0) : s.all();
      PhaseSet r = iterate_to_fixpoint(start, step, s.size() + 2).value;
      if (saved) env[f.name()] = *saved;
      else env.erase(f.name());
      return r;
    }
  }
  throw InputError("unknown formula kind");
}

}  // namespace detail

/// The fact interpreting f. Fixpoints are the least and greatest fixpoints on
/// the lattice of facts.
inline PhaseSet interpret_phase(const PhaseSpace& s, const Formula& f, const PhaseEnv& env = {}) {
  PhaseEnv e = env;
  return detail::phase(s, f, e);
}

/// Validity as membership of the unit.
inline bool holds(const PhaseSpace& s, const Formula& f) {
  if (!is_closed(f)) throw InputError("holds: formula must be closed");
  return interpret_phase(s, f) >> s.unit() & 1;
}

// ---------------------------------------------------------------------------
// Enumeration of small commutative monoids

namespace detail {

using Table = std::vector<std::vector<std::size_t>>;

inline bool table_less_under(const Table& t, const std::vector<std::size_t>& perm) {
  // Compares the relabelled table against t; perm maps old -> new.
  const std::size_t n = t.size();
  std::vector<std::size_t> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t relabelled = perm[t[inv[i]][inv[j]]];
      if (relabelled != t[i][j]) return relabelled < t[i][j];
    }
  return false;
}

inline bool is_canonical(const Table& t) {
  const std::size_t n = t.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin() + 1, perm.end()))
    if (table_less_under(t, perm)) return false;
  return true;
}

}  // namespace detail

/// Commutative monoids on {0..n-1} with unit 0, one per isomorphism class
/// (the lexicographically least table), in a fixed order.
inline std::vector<std::vector<std::vector<std::size_t>>> enumerate_monoids(std::size_t n) {
  using detail::Table;
  std::vector<Table> out;
  if (n == 0) return out;
  Table t(n, std::vector<std::size_t>(n, n));
  for (std::size_t i = 0; i < n; ++i) t[0][i] = t[i][0] = i;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) cells.emplace_back(i, j);
  auto consistent = [&]() {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t ab = t[a][b];
        if (ab == n) continue;
        for (std::size_t c = 0; c < n; ++c) {
          std::size_t bc = t[b][c];
          if (bc == n) continue;
          std::size_t l = t[ab][c], r = t[a][bc];
          if (l != n && r != n && l != r) return false;
        }
      }
    return true;
  };
  auto rec = [&](auto& self, std::size_t k) -> void {
    if (k == cells.size()) {
      if (detail::is_canonical(t)) out.push_back(t);
      return;
    }
    auto [i, j] = cells[k];
    for (std::size_t v = 0; v < n; ++v) {
      t[i][j] = t[j][i] = v;
      if (consistent()) self(self, k + 1);
    }
    t[i][j] = t[j][i] = n;
  };
  rec(rec, 0);
  return out;
}

inline std::vector<std::string> default_element_names(std::size_t n) {
  std::vector<std::string> names{"e"};
  for (std::size_t i = 1; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i - 1)));
  return names;
}

/// Every (monoid, pole) pair with at most max_size elements, in search order.
inline std::vector<PhaseSpace> enumerate_spaces(std::size_t max_size) {
  std::vector<PhaseSpace> out;
  for (std::size_t n = 1; n <= max_size; ++n)
    for (auto& t : enumerate_monoids(n)) {
      PhaseSpace base(default_element_names(n), 0, t, 0);
      for (PhaseSet p = 0; p <= base.all(); ++p) out.push_back(base.with_pole(p));
    }
  return out;
}

struct SearchOptions {
  std::size_t cap = 5;
  std::size_t workers = 0;  // 0: hardware concurrency
};

/// First space, in enumeration order, in which f does not hold.
inline std::optional<PhaseSpace> search_counter_model(const Formula& f, std::size_t max_size,
                                                      SearchOptions opt = {}) {
  if (max_size > opt.cap)
    throw BudgetExceeded("phase-search size " + std::to_string(max_size) + " exceeds the cap of " +
                         std::to_string(opt.cap));
  if (!is_closed(f)) throw InputError("phase-search: formula must be closed");
  std::vector<PhaseSpace> spaces = enumerate_spaces(max_size);
  std::size_t workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::size_t>(workers, std::max<std::size_t>(1, spaces.size()));
  const std::size_t chunk = (spaces.size() + workers - 1) / std::max<std::size_t>(workers, 1);
  auto scan = [&](std::size_t from, std::size_t to) -> std::optional<std::size_t> {
    for (std::size_t i = from; i < to; ++i)
      if (!holds(spaces[i], f)) return i;
    return std::nullopt;
  };
  if (workers <= 1) {
    if (auto i = scan(0, spaces.size())) return spaces[*i];
    return std::nullopt;
  }
  std::vector<std::future<std::optional<std::size_t>>> jobs;
  for (std::size_t from = 0; from < spaces.size(); from += chunk)
    jobs.push_back(std::async(std::launch::async, scan, from, std::min(spaces.size(), from + chunk)));
  std::optional<std::size_t> first;
  for (auto& j : jobs) {
    auto r = j.get();
    if (r && !first) first = r;
  }
  if (first) return spaces[*first];
  return std::nullopt;
}

}  // namespace mull

#endif  // MULL_PHASE_HPP
