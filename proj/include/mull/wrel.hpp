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

// Weighted relations: semiring-valued matrices, scalar poles and their
// admissibility.

#ifndef MULL_WREL_HPP
#define MULL_WREL_HPP

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mull/error.hpp"
#include "mull/semiring.hpp"

namespace mull {

/// A finite matrix A × B → S, stored densely. Vectors are 1-row matrices.
template <Semiring S>
class SemiringMatrix {
 public:
  using Value = typename S::value_type;

  SemiringMatrix(std::vector<std::string> rows, std::vector<std::string> cols)
      : rows_(std::move(rows)), cols_(std::move(cols)), data_(rows_.size() * cols_.size(), S::zero()) {
    check_unique(rows_, "row");
    check_unique(cols_, "column");
  }

  static SemiringMatrix identity(const std::vector<std::string>& index) {
    SemiringMatrix m(index, index);
    for (std::size_t i = 0; i < index.size(); ++i) m.set(i, i, S::one());
    return m;
  }

  /// A 1-row matrix with row index "*".
  static SemiringMatrix vector(const std::vector<std::string>& index, const std::vector<Value>& values) {
    if (values.size() != index.size()) throw IndexMismatch("vector has the wrong number of entries");
    SemiringMatrix m({"*"}, index);
    for (std::size_t j = 0; j < values.size(); ++j) m.set(0, j, values[j]);
    return m;
  }

  const std::vector<std::string>& rows() const { return rows_; }
  const std::vector<std::string>& cols() const { return cols_; }
  Value at(std::size_t i, std::size_t j) const { return data_[i * cols_.size() + j]; }
  void set(std::size_t i, std::size_t j, Value v) { data_[i * cols_.size() + j] = std::move(v); }

  std::vector<Value> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_.size()),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_.size())};
  }

  friend bool operator==(const SemiringMatrix& a, const SemiringMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static void check_unique(const std::vector<std::string>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (v[i] == v[j]) throw InputError(std::string("duplicate ") + what + " index " + v[i]);
  }

  std::vector<std::string> rows_, cols_;
  std::vector<Value> data_;
};

/// (g∘f)(a,c) = Σ_b f(a,b)·g(b,c).
template <Semiring S>
SemiringMatrix<S> compose(const SemiringMatrix<S>& f, const SemiringMatrix<S>& g) {
  if (f.cols() != g.rows()) throw IndexMismatch("compose: column index of f differs from row index of g");
  SemiringMatrix<S> out(f.rows(), g.cols());
  for (std::size_t a = 0; a < f.rows().size(); ++a)
    for (std::size_t c = 0; c < g.cols().size(); ++c) {
      auto acc = S::zero();
      for (std::size_t b = 0; b < f.cols().size(); ++b) acc = S::add(acc, S::mul(f.at(a, b), g.at(b, c)));
      out.set(a, c, std::move(acc));
    }
  return out;
}

/// Σ_a x_a·y_a.
template <Semiring S>
typename S::value_type pairing(const std::vector<typename S::value_type>& x,
                               const std::vector<typename S::value_type>& y) {
  if (x.size() != y.size()) throw IndexMismatch("pairing: vectors have different lengths");
  auto acc = S::zero();
  for (std::size_t i = 0; i < x.size(); ++i) acc = S::add(acc, S::mul(x[i], y[i]));
  return acc;
}

// ---------------------------------------------------------------------------
// Matrix files
//
//   rows a b
//   cols x y
//   a x 1/2
//   b y inf

template <Semiring S>
SemiringMatrix<S> parse_matrix(const std::string& text) {
  std::optional<std::vector<std::string>> rows, cols;
  std::vector<std::pair<int, std::vector<std::string>>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "rows" || toks[0] == "cols") {
      auto& slot = toks[0] == "rows" ? rows : cols;
      if (slot) throw InputError("matrix file line " + std::to_string(lineno) + ": duplicate " + toks[0] + " header");
      slot.emplace(toks.begin() + 1, toks.end());
    } else if (toks.size() == 3) {
      entries.emplace_back(lineno, toks);
    } else {
      throw InputError("matrix file line " + std::to_string(lineno) + ": expected 'ROW COL VALUE'");
    }
  }
  if (!rows || !cols) throw InputError("matrix file: missing rows or cols header");
  SemiringMatrix<S> m(*rows, *cols);
  auto find = [](const std::vector<std::string>& v, const std::string& s) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == s) return i;
    return std::nullopt;
  };
  for (const auto& [ln, t] : entries) {
    auto r = find(*rows, t[0]);
    auto c = find(*cols, t[1]);
    std::string where = "matrix file line " + std::to_string(ln) + ": ";
    if (!r) throw InputError(where + "unknown row " + t[0]);
    if (!c) throw InputError(where + "unknown column " + t[1]);
    try {
      m.set(*r, *c, S::parse(t[2]));
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  return m;
}

template <Semiring S>
std::string to_text(const SemiringMatrix<S>& m) {
  std::string out = "rows";
  for (const auto& r : m.rows()) out += " " + r;
  out += "\ncols";
  for (const auto& c : m.cols()) out += " " + c;
  out += "\n";
  for (std::size_t i = 0; i < m.rows().size(); ++i)
    for (std::size_t j = 0; j < m.cols().size(); ++j)
      if (!(m.at(i, j) == S::zero())) out += m.rows()[i] + " " + m.cols()[j] + " " + S::to_string(m.at(i, j)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Poles

/// An ascending chain c_0 ≤ c_1 ≤ ... with its supremum.
template <Semiring S>
struct Chain {
  std::string description;
  std::function<typename S::value_type(std::size_t)> term;
  typename S::value_type supremum;
};

/// A pole: a set of scalars, with whatever closure evidence is known.
template <Semiring S>
struct PoleSpec {
  std::string name;
  std::function<bool(const typename S::value_type&)> member;
  /// Set when closure under suprema of ascending chains is known.
  std::optional<std::string> closure_evidence;
  /// Chains to test, typically those approaching the boundary of the pole.
  std::vector<Chain<S>> chains;
};

template <Semiring S>
bool orthogonal_pair(const std::vector<typename S::value_type>& x, const std::vector<typename S::value_type>& y,
                     const PoleSpec<S>& pole) {
  return pole.member(pairing<S>(x, y));
}

enum class Verdict { Admissible, NotAdmissible, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Admissible: return "ADMISSIBLE";
    case Verdict::NotAdmissible: return "NOT_ADMISSIBLE";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct AdmissibilityReport {
  std::string pole;
  std::string semiring;
  Verdict verdict = Verdict::Inconclusive;
  bool contains_zero = false;
  std::string reason;
  /// Witness chain for NOT_ADMISSIBLE (empty when the bottom is missing).
  std::vector<std::string> witness;
  std::optional<std::string> witness_supremum;
};

/// Terms of each chain inspected by is_admissible_pole.
inline constexpr std::size_t kChainSample = 64;

template <Semiring S>
AdmissibilityReport is_admissible_pole(const PoleSpec<S>& p) {
  AdmissibilityReport r{p.name, S::name};
  r.contains_zero = p.member(S::zero());
  if (!r.contains_zero) {
    r.verdict = Verdict::NotAdmissible;
    r.reason = "0 is not in the pole, so it has no bottom element";
    return r;
  }
  for (const auto& c : p.chains) {
    bool inside = true;
    for (std::size_t n = 0; n < kChainSample && inside; ++n) {
      auto x = c.term(n);
      if (!p.member(x)) inside = false;
      if (n > 0 && !S::leq(c.term(n - 1), x))
        throw PreconditionFailed("chain '" + c.description + "' is not ascending at step " + std::to_string(n));
      if (!S::leq(x, c.supremum))
        throw PreconditionFailed("chain '" + c.description + "' exceeds its declared supremum");
    }
    if (inside && !p.member(c.supremum)) {
      r.verdict = Verdict::NotAdmissible;
      r.reason = "the chain " + c.description + " stays in the pole but its supremum does not";
      for (std::size_t n = 0; n < 5; ++n) r.witness.push_back(S::to_string(c.term(n)));
      r.witness_supremum = S::to_string(c.supremum);
      return r;
    }
  }
  if (p.closure_evidence) {
    r.verdict = Verdict::Admissible;
    r.reason = *p.closure_evidence;
  } else {
    r.verdict = Verdict::Inconclusive;
    r.reason = "no violation among " + std::to_string(p.chains.size()) +
               " sampled chains, but no closure evidence is declared";
  }
  return r;
}

/// [0,1] ⊆ R∞.
inline PoleSpec<RealInf> unit_interval_pole() {
  using V = RealInf::value_type;
  PoleSpec<RealInf> p;
  p.name = "unit-interval";
  p.member = [](const V& v) { return !v.inf && v.value >= 0 && v.value <= 1; };
  p.closure_evidence = "[0,1] is closed and contains 0; a supremum of values bounded by 1 is bounded by 1";
  p.chains.push_back({"1 - 2^-n", [](std::size_t n) {
                        return V{1 - Rational(1, BigInt(1) << n), false};
                      },
                      V{1, false}});
  p.chains.push_back({"n/(n+1)", [](std::size_t n) { return V{Rational(n, n + 1), false}; }, V{1, false}});
  p.chains.push_back({"0, 0, ...", [](std::size_t) { return V{0, false}; }, V{0, false}});
  return p;
}

/// ℕ ⊆ N∞.
inline PoleSpec<NatInf> naturals_pole() {
  PoleSpec<NatInf> p;
  p.name = "naturals";
  p.member = [](const NatInf::value_type& v) { return !v.inf; };
  p.chains.push_back({"0, 1, 2, ...", [](std::size_t n) { return NatInf::of(static_cast<long>(n)); }, NatInf::inf()});
  return p;
}

/// {{id}} on Rel(1,1), which is Bool: the empty relation is false.
inline PoleSpec<BoolSemiring> totality_pole() {
  PoleSpec<BoolSemiring> p;
  p.name = "totality";
  p.member = [](bool v) { return v; };
  return p;
}

/// The whole of R∞.
inline PoleSpec<RealInf> full_pole() {
  PoleSpec<RealInf> p;
  p.name = "full";
  p.member = [](const RealInf::value_type&) { return true; };
  p.closure_evidence = "every subset of R∞ has a supremum in R∞";
  return p;
}

/// [0,1) ⊆ R∞, which misses the supremum of 1 - 2^-n.
inline PoleSpec<RealInf> half_open_pole() {
  PoleSpec<RealInf> p = unit_interval_pole();
  p.name = "half-open";
  p.member = [](const RealInf::value_type& v) { return !v.inf && v.value >= 0 && v.value < 1; };
  p.closure_evidence.reset();
  return p;
}

inline std::vector<std::string> known_poles() { return {"unit-interval", "naturals", "totality", "full", "half-open"}; }

inline AdmissibilityReport admissibility_by_name(const std::string& name) {
  if (name == "unit-interval") return is_admissible_pole(unit_interval_pole());
  if (name == "naturals") return is_admissible_pole(naturals_pole());
  if (name == "totality") return is_admissible_pole(totality_pole());
  if (name == "full") return is_admissible_pole(full_pole());
  if (name == "half-open") return is_admissible_pole(half_open_pole());
  std::string all;
  for (const auto& n : known_poles()) all += (all.empty() ? "" : ", ") + n;
  throw InputError("unknown pole '" + name + "' (known: " + all + ")");
}

}  // namespace mull

#endif  // MULL_WREL_HPP
