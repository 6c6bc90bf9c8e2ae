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

// Bipolar membership for the pole [0,1] on non-negative rational vectors,
// decided by an exact simplex over the polar polyhedron.

#ifndef MULL_POLAR_HPP
#define MULL_POLAR_HPP

#include <optional>
#include <string>
#include <vector>

#include "mull/error.hpp"
#include "mull/semiring.hpp"

namespace mull {

class EmptyGenerators : public InputError {
 public:
  EmptyGenerators() : InputError("bipolar_member: the generator set is empty") {}
};

using RVector = std::vector<Rational>;

namespace detail {

/// max c·y subject to A y ≤ 1, y ≥ 0, by the simplex method with Bland's
/// rule. The origin is feasible, so no first phase is needed. Returns nullopt
/// when unbounded.
inline std::optional<Rational> simplex_max(const std::vector<RVector>& a, const RVector& c) {
  const std::size_t m = a.size(), d = c.size(), cols = d + m;
  // Row i: coefficients over y then slacks, rhs last.
  std::vector<RVector> t(m, RVector(cols + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) t[i][j] = a[i][j];
    t[i][d + i] = 1;
    t[i][cols] = 1;
  }
  RVector z(cols + 1, 0);  // z row: -c, objective value in the last slot
  for (std::size_t j = 0; j < d; ++j) z[j] = -c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = d + i;
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (z[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) return z[cols];
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) return std::nullopt;
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    if (z[enter] != 0) {
      Rational f = z[enter];
      for (std::size_t j = 0; j <= cols; ++j) z[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
}

}  // namespace detail

struct PolarResult {
  /// sup{ ⟨x,y⟩ : y ≥ 0, ⟨g,y⟩ ≤ 1 for all g }, or nullopt when unbounded.
  std::optional<Rational> supremum;
  /// Coordinates where x is positive but no generator is.
  std::vector<std::size_t> unbounded_coordinates;
  bool member = false;
};

/// Decides x ∈ G^⊥⊥ for the pole [0,1].
inline PolarResult polar_analysis(const std::vector<RVector>& generators, const RVector& x, std::size_t dim_cap = 8) {
  if (generators.empty()) throw EmptyGenerators();
  const std::size_t d = x.size();
  if (d > dim_cap)
    throw DimensionCap("dimension " + std::to_string(d) + " exceeds the cap of " + std::to_string(dim_cap));
  for (const auto& g : generators)
    if (g.size() != d) throw IndexMismatch("generator and point have different dimensions");
  auto check_nonneg = [](const RVector& v) {
    for (const auto& e : v)
      if (e < 0) throw InputError("bipolar_member: entries must be non-negative");
  };
  check_nonneg(x);
  for (const auto& g : generators) check_nonneg(g);

  PolarResult r;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < d; ++i) {
    bool covered = false;
    for (const auto& g : generators) covered = covered || g[i] > 0;
    if (covered) support.push_back(i);
    else if (x[i] > 0) r.unbounded_coordinates.push_back(i);
  }
  if (!r.unbounded_coordinates.empty()) return r;
  // Off the support y_i is unconstrained but x_i = 0, so those coordinates
  // drop out; on the support every y_i is bounded by 1/g_i.
  std::vector<RVector> a;
  for (const auto& g : generators) {
    RVector row;
    for (auto i : support) row.push_back(g[i]);
    a.push_back(std::move(row));
  }
  RVector c;
  for (auto i : support) c.push_back(x[i]);
  r.supremum = detail::simplex_max(a, c);
  if (!r.supremum) throw Error("polar_analysis: bounded program reported unbounded");
  r.member = *r.supremum <= 1;
  return r;
}

inline bool bipolar_member(const std::vector<RVector>& generators, const RVector& x, std::size_t dim_cap = 8) {
  return polar_analysis(generators, x, dim_cap).member;
}

}  // namespace mull

#endif  // MULL_POLAR_HPP
