// SPDX-License-Identifier: Apache-2.0
#include "redsimp/numerics.hpp"

#include <sstream>

#include "redsimp/lp.hpp"

namespace redsimp {

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const RatVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int floor_of(const Rational& q) {
  return floor_div(q.get_num(), q.get_den());
}

Int ceil_of(const Rational& q) { return ceil_div(q.get_num(), q.get_den()); }

long to_long(const Int& v) {
  if (!v.fits_slong_p()) throw UnsupportedInput("integer out of machine range");
  return v.get_si();
}

Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

bool is_zero(const RatVector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

RatVector scaled(const RatVector& v, const Rational& s) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
  return r;
}

RatVector add(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("add: length mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVector sub(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub: length mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVector unit_vector(std::size_t n, std::size_t k) {
  RatVector v(n);
  v[k] = 1;
  return v;
}

IntVector primitive_integer(const RatVector& v) {
  Int l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVector r(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational t = v[i] * l;
    r[i] = t.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : r) x /= g;
  return r;
}

IntVector canonical_direction(const RatVector& v) {
  IntVector r = primitive_integer(v);
  for (const auto& x : r) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : r) y = -y;
    break;
  }
  return r;
}

RatVector to_rational(const IntVector& v) {
  RatVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
  return r;
}

int ParamAffine::sign() const {
  if (param_coeff != 0) return sgn(param_coeff);
  return sgn(constant);
}

std::string to_string(const ParamAffine& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ParamAffine& a) {
  if (a.param_coeff == 0) return os << a.constant.get_str();
  if (a.param_coeff == 1)
    os << "N";
  else if (a.param_coeff == -1)
    os << "-N";
  else
    os << a.param_coeff.get_str() << "N";
  if (a.constant > 0) os << "+" << a.constant.get_str();
  if (a.constant < 0) os << a.constant.get_str();
  return os;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows,
                               std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw DimensionMismatch("matrix row has wrong length");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatVector RatMatrix::row(std::size_t r) const {
  return RatVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

RatVector RatMatrix::col(std::size_t c) const {
  RatVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

std::vector<RatVector> RatMatrix::row_list() const {
  std::vector<RatVector> out;
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

RatVector RatMatrix::apply(const RatVector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("matrix apply: length");
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn(at(r, c)) != 0) s += at(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("matrix product");
  RatMatrix m(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (sgn(at(r, k)) == 0) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) m.at(r, c) += at(r, k) * o.at(k, c);
    }
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
  return m;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RatVector>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || sgn(rows[o][c]) == 0) continue;
      Rational f = rows[o][c];
      for (std::size_t k = 0; k < cols; ++k)
        if (sgn(rows[r][k]) != 0) rows[o][k] -= f * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Integer-preserving elimination used for rank (Bareiss style).
std::size_t bareiss_rank(std::vector<IntVector> m, std::size_t cols) {
  std::size_t r = 0;
  Int prev = 1;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    for (std::size_t o = r + 1; o < m.size(); ++o) {
      for (std::size_t k = c + 1; k < cols; ++k)
        m[o][k] = (m[r][c] * m[o][k] - m[o][c] * m[r][k]) / prev;
      m[o][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(const std::vector<RatVector>& rows, std::size_t cols) {
  std::vector<IntVector> m;
  for (const auto& row : rows) {
    if (row.size() != cols) throw DimensionMismatch("rank: row length");
    m.push_back(primitive_integer(row));
  }
  return bareiss_rank(std::move(m), cols);
}

std::size_t rank(const RatMatrix& m) { return rank(m.row_list(), m.cols()); }

LinearSubspace LinearSubspace::span(const std::vector<RatVector>& vectors,
                                    std::size_t ambient) {
  LinearSubspace s(ambient);
  std::vector<RatVector> rows;
  for (const auto& v : vectors) {
    if (v.size() != ambient) throw DimensionMismatch("span: vector length");
    rows.push_back(v);
  }
  rref(rows, ambient);
  s.basis_ = std::move(rows);
  return s;
}

LinearSubspace LinearSubspace::full(std::size_t ambient) {
  std::vector<RatVector> b;
  for (std::size_t i = 0; i < ambient; ++i) b.push_back(unit_vector(ambient, i));
  return span(b, ambient);
}

bool LinearSubspace::contains(const RatVector& v) const {
  if (v.size() != ambient_) throw DimensionMismatch("contains: length");
  if (is_zero(v)) return true;
  std::vector<RatVector> rows = basis_;
  rows.push_back(v);
  return rank(rows, ambient_) == basis_.size();
}

bool LinearSubspace::contains(const LinearSubspace& o) const {
  if (o.ambient_ != ambient_) throw DimensionMismatch("contains: ambient");
  for (const auto& v : o.basis_)
    if (!contains(v)) return false;
  return true;
}

LinearSubspace LinearSubspace::annihilator() const {
  if (basis_.empty()) return full(ambient_);
  return null_space(RatMatrix::from_rows(basis_, ambient_));
}

std::vector<IntVector> LinearSubspace::integer_basis() const {
  std::vector<IntVector> out;
  for (const auto& b : basis_) out.push_back(primitive_integer(b));
  return out;
}

LinearSubspace null_space(const RatMatrix& m) {
  std::size_t n = m.cols();
  std::vector<RatVector> rows = m.row_list();
  std::vector<std::size_t> piv = rref(rows, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(n);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -rows[r][f];
    basis.push_back(v);
  }
  return LinearSubspace::span(basis, n);
}

LinearSubspace intersect_subspaces(const LinearSubspace& u,
                                   const LinearSubspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw DimensionMismatch("intersect_subspaces: ambient dimensions differ");
  std::size_t n = u.ambient_dim();
  std::vector<RatVector> rows = u.annihilator().basis();
  const LinearSubspace va = v.annihilator();
  for (const auto& r : va.basis()) rows.push_back(r);
  if (rows.empty()) return LinearSubspace::full(n);
  return null_space(RatMatrix::from_rows(rows, n));
}

LinearSubspace kernel_of(const RatVector& row) {
  return null_space(RatMatrix::from_rows({row}, row.size()));
}

std::optional<RatVector> solve_linear(const RatMatrix& m, const RatVector& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve_linear: rhs");
  std::size_t n = m.cols();
  std::vector<RatVector> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    RatVector row = m.row(r);
    row.push_back(b[r]);
    rows.push_back(row);
  }
  std::vector<std::size_t> piv = rref(rows, n + 1);
  RatVector x(n);
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == n) return std::nullopt;
    x[piv[r]] = rows[r][n];
  }
  return x;
}

std::optional<RatVector> feasible_sign_system(
    const std::vector<RatVector>& zeros, const std::vector<RatVector>& positives,
    const std::vector<RatVector>& negatives, const LinearSubspace& within) {
  const std::size_t n = within.ambient_dim();
  auto check_len = [n](const std::vector<RatVector>& vs) {
    for (const auto& v : vs)
      if (v.size() != n) throw DimensionMismatch("feasible_sign_system: length");
  };
  check_len(zeros);
  check_len(positives);
  check_len(negatives);
  const auto& basis = within.basis();
  const std::size_t k = basis.size();
  if (k == 0) return std::nullopt;

  // rho = sum_i y_i b_i; variables are y (k) then t (n) with t >= |rho|.
  auto rho_row = [&](const RatVector& w) {
    RatVector a(k + n);
    for (std::size_t i = 0; i < k; ++i) a[i] = dot(w, basis[i]);
    return a;
  };
  std::optional<RatVector> result;
  if (positives.empty() && negatives.empty()) {
    std::vector<RatVector> rows;
    for (const auto& z : zeros) {
      RatVector a(k);
      for (std::size_t i = 0; i < k; ++i) a[i] = dot(z, basis[i]);
      rows.push_back(a);
    }
    LinearSubspace ker = rows.empty() ? LinearSubspace::full(k)
                                      : null_space(RatMatrix::from_rows(rows, k));
    if (ker.dim() == 0) return std::nullopt;
    RatVector y = ker.basis().front();
    RatVector rho(n);
    for (std::size_t i = 0; i < k; ++i) rho = add(rho, scaled(basis[i], y[i]));
    result = rho;
  } else {
    std::vector<LinRow> rows;
    for (const auto& z : zeros) rows.push_back({rho_row(z), 0, true});
    for (const auto& p : positives) rows.push_back({rho_row(p), -1, false});
    for (const auto& q : negatives) {
      RatVector a = rho_row(q);
      for (auto& x : a) x = -x;
      rows.push_back({a, -1, false});
    }
    for (std::size_t j = 0; j < n; ++j) {
      RatVector a(k + n), b(k + n);
      for (std::size_t i = 0; i < k; ++i) {
        a[i] = -basis[i][j];
        b[i] = basis[i][j];
      }
      a[k + j] = 1;
      b[k + j] = 1;
      rows.push_back({a, 0, false});
      rows.push_back({b, 0, false});
    }
    RatVector obj(k + n);
    for (std::size_t j = 0; j < n; ++j) obj[k + j] = -1;
    LpResult res = lp_maximize(k + n, rows, obj);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    RatVector rho(n);
    for (std::size_t i = 0; i < k; ++i) rho = add(rho, scaled(basis[i], res.x[i]));
    result = rho;
  }
  RatVector rho = to_rational(primitive_integer(*result));
  for (const auto& z : zeros)
    if (sgn(dot(z, rho)) != 0)
      throw InvariantViolation("sign witness breaks a zero constraint");
  for (const auto& p : positives)
    if (sgn(dot(p, rho)) <= 0)
      throw InvariantViolation("sign witness breaks a positive constraint");
  for (const auto& q : negatives)
    if (sgn(dot(q, rho)) >= 0)
      throw InvariantViolation("sign witness breaks a negative constraint");
  if (!within.contains(rho)) throw InvariantViolation("sign witness escapes");
  return rho;
}

}  // namespace redsimp
