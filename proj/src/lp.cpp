// SPDX-License-Identifier: Apache-2.0
#include "redsimp/lp.hpp"

namespace redsimp {

namespace {

struct Tableau {
  std::size_t cols = 0;  // structural columns, rhs stored at index cols
  std::vector<RatVector> rows;
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c) {
    RatVector& pr = rows[r];
    Rational inv = 1 / pr[c];
    for (auto& x : pr)
      if (sgn(x) != 0) x *= inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || sgn(rows[o][c]) == 0) continue;
      Rational f = rows[o][c];
      RatVector& orow = rows[o];
      for (std::size_t k = 0; k <= cols; ++k)
        if (sgn(pr[k]) != 0) orow[k] -= f * pr[k];
    }
    basis[r] = c;
  }

  // Maximize cost·x over columns flagged in `allowed`. Returns false when
  // unbounded.
  bool run(const RatVector& cost, const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols && enter == cols; ++j) {
        if (!allowed[j]) continue;
        Rational d = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (sgn(rows[i][j]) != 0 && sgn(cost[basis[i]]) != 0)
            d -= cost[basis[i]] * rows[i][j];
        if (sgn(d) > 0) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (sgn(rows[i][enter]) <= 0) continue;
        Rational ratio = rows[i][cols] / rows[i][enter];
        if (leave == rows.size() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }

  Rational value(const RatVector& cost) const {
    Rational v = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (sgn(cost[basis[i]]) != 0) v += cost[basis[i]] * rows[i][cols];
    return v;
  }
};

}  // namespace

LpResult lp_maximize(std::size_t nvars, const std::vector<LinRow>& input,
                     const RatVector& objective) {
  std::size_t nineq = 0;
  for (const auto& r : input) {
    if (r.a.size() != nvars) throw DimensionMismatch("lp: row length");
    if (!r.equality) ++nineq;
  }
  const std::size_t m = input.size();
  const std::size_t art0 = 2 * nvars + nineq;
  Tableau t;
  t.cols = art0 + m;
  t.rows.assign(m, RatVector(t.cols + 1));
  t.basis.assign(m, 0);
  std::size_t slack = 2 * nvars;
  for (std::size_t i = 0; i < m; ++i) {
    const LinRow& r = input[i];
    RatVector& row = t.rows[i];
    for (std::size_t j = 0; j < nvars; ++j) {
      row[j] = r.a[j];
      row[nvars + j] = -r.a[j];
    }
    if (!r.equality) row[slack++] = -1;
    row[t.cols] = -r.b;
    if (sgn(row[t.cols]) < 0)
      for (auto& x : row) x = -x;
    row[art0 + i] = 1;
    t.basis[i] = art0 + i;
  }

  RatVector phase1(t.cols);
  for (std::size_t i = 0; i < m; ++i) phase1[art0 + i] = -1;
  std::vector<bool> allowed(t.cols, true);
  t.run(phase1, allowed);
  LpResult res;
  if (sgn(t.value(phase1)) < 0) return res;

  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < art0) {
      ++i;
      continue;
    }
    std::size_t c = 0;
    while (c < art0 && sgn(t.rows[i][c]) == 0) ++c;
    if (c == art0) {
      t.rows.erase(t.rows.begin() + i);
      t.basis.erase(t.basis.begin() + i);
      continue;
    }
    t.pivot(i, c);
    ++i;
  }
  for (std::size_t j = art0; j < t.cols; ++j) allowed[j] = false;

  RatVector cost(t.cols);
  if (objective.size() != nvars && !objective.empty())
    throw DimensionMismatch("lp: objective length");
  for (std::size_t j = 0; j < objective.size(); ++j) {
    cost[j] = objective[j];
    cost[nvars + j] = -objective[j];
  }
  if (!t.run(cost, allowed)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  RatVector full(t.cols);
  for (std::size_t i = 0; i < t.rows.size(); ++i) full[t.basis[i]] = t.rows[i][t.cols];
  res.x.assign(nvars, 0);
  for (std::size_t j = 0; j < nvars; ++j) res.x[j] = full[j] - full[nvars + j];
  res.value = t.value(cost);
  return res;
}

bool lp_feasible(std::size_t nvars, const std::vector<LinRow>& rows) {
  return lp_maximize(nvars, rows, RatVector()).status != LpStatus::Infeasible;
}

}  // namespace redsimp
