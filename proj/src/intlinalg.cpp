// SPDX-License-Identifier: Apache-2.0
#include "redsimp/intlinalg.hpp"

#include <cstdlib>

namespace redsimp {

IntMatrix int_identity(std::size_t n) {
  IntMatrix m(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix int_transpose(const IntMatrix& m, std::size_t cols) {
  IntMatrix t(cols, IntVector(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c][r] = m[r][c];
  return t;
}

IntMatrix int_product(const IntMatrix& a, const IntMatrix& b, std::size_t inner,
                      std::size_t cols) {
  IntMatrix p(a.size(), IntVector(cols));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[r][k] == 0) continue;
      for (std::size_t c = 0; c < cols; ++c) p[r][c] += a[r][k] * b[k][c];
    }
  return p;
}

RatMatrix to_rational(const IntMatrix& m, std::size_t cols) {
  RatMatrix r(m.size(), cols);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) r.at(i, j) = m[i][j];
  return r;
}

Int int_determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  std::vector<RatVector> a(n, RatVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det.get_num();
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  IntMatrix inv(n, IntVector(n));
  RatMatrix rm = to_rational(m, n);
  for (std::size_t c = 0; c < n; ++c) {
    auto x = solve_linear(rm, unit_vector(n, c));
    if (!x) throw InvariantViolation("matrix is singular");
    for (std::size_t r = 0; r < n; ++r) {
      if ((*x)[r].get_den() != 1) throw InvariantViolation("matrix is not unimodular");
      inv[r][c] = (*x)[r].get_num();
    }
  }
  return inv;
}

ColumnReduction column_reduce(const IntMatrix& input, std::size_t cols) {
  ColumnReduction out;
  out.h = input;
  out.v = int_identity(cols);
  IntMatrix& h = out.h;
  IntMatrix& v = out.v;
  auto col_op = [&](std::size_t dst, std::size_t src, const Int& q) {
    // column dst -= q * column src
    for (auto& row : h) row[dst] -= q * row[src];
    for (auto& row : v) row[dst] -= q * row[src];
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : h) std::swap(row[a], row[b]);
    for (auto& row : v) std::swap(row[a], row[b]);
  };
  std::size_t pos = 0;
  for (std::size_t r = 0; r < h.size() && pos < cols; ++r) {
    for (;;) {
      std::size_t best = cols;
      for (std::size_t c = pos; c < cols; ++c) {
        if (h[r][c] == 0) continue;
        if (best == cols || abs(h[r][c]) < abs(h[r][best])) best = c;
      }
      if (best == cols) break;
      col_swap(pos, best);
      bool done = true;
      for (std::size_t c = pos + 1; c < cols; ++c) {
        if (h[r][c] == 0) continue;
        col_op(c, pos, floor_div(h[r][c], h[r][pos]));
        if (h[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (h[r][pos] != 0) {
      if (h[r][pos] < 0) {
        for (auto& row : h) row[pos] = -row[pos];
        for (auto& row : v) row[pos] = -row[pos];
      }
      ++pos;
    }
  }
  out.rank = pos;
  return out;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m, std::size_t cols) {
  ColumnReduction cr = column_reduce(m, cols);
  std::vector<IntVector> out;
  for (std::size_t c = cr.rank; c < cols; ++c) {
    IntVector k(cols);
    for (std::size_t r = 0; r < cols; ++r) k[r] = cr.v[r][c];
    out.push_back(k);
  }
  return out;
}

std::vector<IntVector> integer_kernel(const RatMatrix& m) {
  IntMatrix im;
  for (std::size_t r = 0; r < m.rows(); ++r) im.push_back(primitive_integer(m.row(r)));
  return integer_kernel(im, m.cols());
}

std::optional<IntMatrix> unimodular_completion(
    const std::vector<IntVector>& columns, std::size_t n) {
  const std::size_t k = columns.size();
  if (k == 0) return int_identity(n);
  IntMatrix bt;  // k x n
  for (const auto& c : columns) {
    if (c.size() != n) throw DimensionMismatch("completion: column length");
    bt.push_back(c);
  }
  ColumnReduction cr = column_reduce(bt, n);
  if (cr.rank != k) return std::nullopt;
  // bt * V = [L | 0] with L lower triangular; saturated iff |det L| = 1.
  Int det = 1;
  for (std::size_t i = 0; i < k; ++i) det *= cr.h[i][i];
  if (abs(det) != 1) return std::nullopt;
  // W = V^T satisfies W B = [L^T; 0]; W^{-1} has the completion columns.
  IntMatrix w = int_transpose(cr.v, n);
  IntMatrix winv = unimodular_inverse(w);
  IntMatrix u(n, IntVector(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) u[r][c] = columns[c][r];
    for (std::size_t c = k; c < n; ++c) u[r][c] = winv[r][c];
  }
  if (abs(int_determinant(u)) != 1)
    throw InvariantViolation("completion is not unimodular");
  return u;
}

std::optional<IntMatrix> complete_with_units(const std::vector<IntVector>& cols,
                                        std::size_t n) {
  std::vector<IntVector> extra;
  std::vector<RatVector> all;
  for (const auto& c : cols) all.push_back(to_rational(c));
  for (std::size_t k = 0; k < n && all.size() < n; ++k) {
    RatVector e = unit_vector(n, k);
    all.push_back(e);
    if (rank(all, n) == all.size()) {
      IntVector ie(n);
      ie[k] = 1;
      extra.push_back(ie);
    } else {
      all.pop_back();
    }
  }
  IntMatrix u(n, IntVector(n));
  std::vector<IntVector> order = extra;
  order.insert(order.end(), cols.begin(), cols.end());
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) u[r][c] = order[c][r];
  if (abs(int_determinant(u)) == 1) return u;
  auto h = unimodular_completion(cols, n);
  if (!h) return std::nullopt;
  // Move the completion columns in front.
  const std::size_t k = cols.size();
  IntMatrix v(n, IntVector(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = k; c < n; ++c) v[r][c - k] = (*h)[r][c];
    for (std::size_t c = 0; c < k; ++c) v[r][n - k + c] = (*h)[r][c];
  }
  return v;
}


}  // namespace redsimp
