// Copyright 2026 The fpif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense two-phase simplex with Bland's rule, for test oracles only.
//
//   minimize c^T x  s.t.  A_le x <= b_le,  A_eq x = b_eq,  x >= 0
//
// Scalar is double (with a small pivot tolerance) or an exact rational.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fpif::testing {

template <class S>
struct LpTolerance {
  static bool positive(const S& x) { return x > S(0); }
  static bool negative(const S& x) { return x < S(0); }
};

template <>
struct LpTolerance<double> {
  static bool positive(double x) { return x > 1e-11; }
  static bool negative(double x) { return x < -1e-11; }
};

template <class S>
using Rows = std::vector<std::vector<S>>;

template <class S>
struct LpSolution {
  bool feasible = false;
  bool bounded = true;
  std::vector<S> x;
  S objective = S(0);
};

namespace detail {

template <class S>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : t_(rows, std::vector<S>(cols + 1, S(0))), basis_(rows, 0), cols_(cols) {}

  S& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  S& rhs(std::size_t r) { return t_[r][cols_]; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const S p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r) continue;
      const S f = t_[i][c];
      if (f == S(0)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // Returns false when unbounded.
  bool minimize(const std::vector<S>& cost, const std::vector<bool>& allowed) {
    using Tol = LpTolerance<S>;
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (!allowed[j]) continue;
        S rc = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i) rc -= cost[basis_[i]] * t_[i][j];
        if (Tol::negative(rc)) enter = j;
      }
      if (enter == cols_) return true;
      std::size_t leave = t_.size();
      S best = S(0);
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!Tol::positive(t_[i][enter])) continue;
        const S ratio = t_[i][cols_] / t_[i][enter];
        if (leave == t_.size() || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, enter);
    }
  }

 private:
  Rows<S> t_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

}  // namespace detail

template <class S>
LpSolution<S> solve_lp(const std::vector<S>& c, const Rows<S>& a_le,
                       const std::vector<S>& b_le, const Rows<S>& a_eq,
                       const std::vector<S>& b_eq) {
  using Tol = LpTolerance<S>;
  const std::size_t n = c.size();
  const std::size_t m_le = a_le.size();
  const std::size_t m_eq = a_eq.size();
  const std::size_t m = m_le + m_eq;
  if (b_le.size() != m_le || b_eq.size() != m_eq) {
    throw std::invalid_argument("solve_lp: row count mismatch");
  }
  // Columns: x (n), slacks (m_le), artificials (m).
  const std::size_t slack0 = n;
  const std::size_t art0 = n + m_le;
  const std::size_t cols = art0 + m;
  detail::Tableau<S> tab(m, cols);
  for (std::size_t r = 0; r < m; ++r) {
    const bool le = r < m_le;
    const auto& row = le ? a_le[r] : a_eq[r - m_le];
    if (row.size() != n) throw std::invalid_argument("solve_lp: column mismatch");
    S b = le ? b_le[r] : b_eq[r - m_le];
    const bool flip = b < S(0);
    const S sign = flip ? S(-1) : S(1);
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = sign * row[j];
    if (le) tab.at(r, slack0 + r) = sign;
    tab.rhs(r) = sign * b;
    tab.at(r, art0 + r) = S(1);
    tab.basis()[r] = art0 + r;
  }
  // Rows whose slack already has coefficient +1 start with the slack basic.
  for (std::size_t r = 0; r < m_le; ++r) {
    if (tab.at(r, slack0 + r) == S(1)) tab.pivot(r, slack0 + r);
  }

  std::vector<S> phase1(cols, S(0));
  for (std::size_t r = 0; r < m; ++r) phase1[art0 + r] = S(1);
  std::vector<bool> all(cols, true);
  tab.minimize(phase1, all);
  S infeas = S(0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] >= art0) infeas += tab.rhs(r);
  }
  LpSolution<S> out;
  if (Tol::positive(infeas)) return out;
  out.feasible = true;
  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < art0) continue;
    for (std::size_t j = 0; j < art0; ++j) {
      if (Tol::positive(tab.at(r, j)) || Tol::negative(tab.at(r, j))) {
        tab.pivot(r, j);
        break;
      }
    }
  }
  std::vector<S> phase2(cols, S(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  std::vector<bool> allowed(cols, true);
  for (std::size_t j = art0; j < cols; ++j) allowed[j] = false;
  out.bounded = tab.minimize(phase2, allowed);
  if (!out.bounded) return out;
  out.x.assign(n, S(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) out.x[tab.basis()[r]] = tab.rhs(r);
  }
  out.objective = S(0);
  for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
  return out;
}

// Zero-sum game where the row player minimizes p^T F q.
template <class S>
struct GameSolution {
  S value = S(0);
  std::vector<S> row;
  std::vector<S> col;
};

template <class S>
GameSolution<S> solve_game_lp(const Rows<S>& f) {
  const std::size_t n1 = f.size();
  const std::size_t n2 = f.at(0).size();
  GameSolution<S> out;
  {
    // variables (p, v+, v-): min v s.t. (F^T p)_j - v <= 0, sum p = 1.
    std::vector<S> c(n1 + 2, S(0));
    c[n1] = S(1);
    c[n1 + 1] = S(-1);
    Rows<S> a(n2, std::vector<S>(n1 + 2, S(0)));
    for (std::size_t j = 0; j < n2; ++j) {
      for (std::size_t i = 0; i < n1; ++i) a[j][i] = f[i][j];
      a[j][n1] = S(-1);
      a[j][n1 + 1] = S(1);
    }
    Rows<S> e(1, std::vector<S>(n1 + 2, S(0)));
    for (std::size_t i = 0; i < n1; ++i) e[0][i] = S(1);
    const auto sol = solve_lp<S>(c, a, std::vector<S>(n2, S(0)), e, {S(1)});
    if (!sol.feasible || !sol.bounded) throw std::runtime_error("game LP failed");
    out.value = sol.objective;
    out.row.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n1));
  }
  {
    // variables (q, w+, w-): min -w s.t. w - (F q)_i <= 0, sum q = 1.
    std::vector<S> c(n2 + 2, S(0));
    c[n2] = S(-1);
    c[n2 + 1] = S(1);
    Rows<S> a(n1, std::vector<S>(n2 + 2, S(0)));
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) a[i][j] = -f[i][j];
      a[i][n2] = S(1);
      a[i][n2 + 1] = S(-1);
    }
    Rows<S> e(1, std::vector<S>(n2 + 2, S(0)));
    for (std::size_t j = 0; j < n2; ++j) e[0][j] = S(1);
    const auto sol = solve_lp<S>(c, a, std::vector<S>(n1, S(0)), e, {S(1)});
    if (!sol.feasible || !sol.bounded) throw std::runtime_error("game LP failed");
    out.col.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n2));
  }
  return out;
}

// L1 distance from `mass` to the row player's optimal set
// {p in simplex : (F^T p)_j <= value + slack}. For the column player pass
// -F^T and -value.
inline double distance_to_optimal_set(const Rows<double>& f, double value,
                                      double slack,
                                      const std::vector<double>& mass) {
  const std::size_t n1 = f.size();
  const std::size_t n2 = f.at(0).size();
  // variables (p, s): min sum s, |p - mass| <= s.
  std::vector<double> c(2 * n1, 0.0);
  for (std::size_t i = 0; i < n1; ++i) c[n1 + i] = 1.0;
  Rows<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < n1; ++i) {
    std::vector<double> up(2 * n1, 0.0), down(2 * n1, 0.0);
    up[i] = 1.0;
    up[n1 + i] = -1.0;
    down[i] = -1.0;
    down[n1 + i] = -1.0;
    a.push_back(up);
    b.push_back(mass[i]);
    a.push_back(down);
    b.push_back(-mass[i]);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    std::vector<double> row(2 * n1, 0.0);
    for (std::size_t i = 0; i < n1; ++i) row[i] = f[i][j];
    a.push_back(row);
    b.push_back(value + slack);
  }
  Rows<double> e(1, std::vector<double>(2 * n1, 0.0));
  for (std::size_t i = 0; i < n1; ++i) e[0][i] = 1.0;
  const auto sol = solve_lp<double>(c, a, b, e, {1.0});
  if (!sol.feasible || !sol.bounded) throw std::runtime_error("distance LP failed");
  return sol.objective;
}

}  // namespace fpif::testing
