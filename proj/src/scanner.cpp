// SPDX-License-Identifier: Apache-2.0
#include "redsimp/scanner.hpp"

namespace redsimp {

namespace {

long as_long(const Int& v) { return to_long(v); }

long floor_div_l(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div_l(long a, long b) { return -floor_div_l(-a, b); }

}  // namespace

FiberScanner::FiberScanner(const Reduction& r) : m_(r.answer_dim()), d_(r.d()) {
  const std::size_t total = m_ + d_;
  const long lb = r.param_lb();
  if (r.body.is_empty()) {
    empty_ = true;
    return;
  }
  std::vector<Constraint> cons;
  for (const auto& c : r.body.constraints()) {
    Constraint l;
    l.equality = c.equality;
    l.coeffs.assign(m_, 0);
    l.coeffs.insert(l.coeffs.end(), c.coeffs.begin(), c.coeffs.end());
    l.param = c.param;
    l.constant = c.constant;
    cons.push_back(l);
    Check ch;
    for (const auto& v : c.coeffs) ch.coeffs.push_back(as_long(v));
    ch.param = as_long(c.param);
    ch.constant = as_long(c.constant);
    ch.equality = c.equality;
    body_.push_back(ch);
  }
  for (std::size_t row = 0; row < m_; ++row) {
    RatVector lin(total);
    lin[row] = -1;
    for (std::size_t c = 0; c < d_; ++c) lin[m_ + c] = r.write.matrix.at(row, c);
    Constraint e = Constraint::from_rational(lin, r.write.param_col[row],
                                             r.write.const_col[row], true);
    cons.push_back(e);
    // Unnormalized check keeps exact integer semantics for rational maps.
    Rational den = 1;
    for (std::size_t c = 0; c < d_; ++c)
      den = den * r.write.matrix.at(row, c).get_den();
    den *= r.write.param_col[row].get_den() * r.write.const_col[row].get_den();
    Check ch;
    for (std::size_t c = 0; c < total; ++c) ch.coeffs.push_back(as_long(Int(lin[c] * den)));
    ch.param = as_long(Int(r.write.param_col[row] * den));
    ch.constant = as_long(Int(r.write.const_col[row] * den));
    ch.equality = true;
    write_.push_back(ch);
  }

  levels_.assign(d_, {});
  for (std::size_t k = d_; k-- > 0;) {
    const std::size_t var = m_ + k;
    for (const auto& c : cons) {
      if (c.coeffs[var] == 0) continue;
      Row row;
      row.coef = as_long(c.coeffs[var]);
      for (std::size_t v = 0; v < var; ++v) row.rest.push_back(as_long(c.coeffs[v]));
      row.param = as_long(c.param);
      row.constant = as_long(c.constant);
      row.equality = c.equality;
      levels_[k].push_back(row);
    }
    cons = drop_variable(fm_eliminate(cons, var), var);
    for (const auto& c : cons)
      if (c.linear_is_zero() && c.param == 0 && !c.trivially_true()) {
        empty_ = true;
        return;
      }
    if (cons.size() > 2 * var + 2) {
      Polyhedron p(var, cons, lb);
      if (p.is_empty()) {
        empty_ = true;
        return;
      }
      cons = p.constraints();
    }
  }
}

bool FiberScanner::scan(std::size_t level, std::vector<long>& vars, long n,
                        const std::function<void(const std::vector<long>&)>& f) const {
  if (level == d_) {
    std::vector<long> z(vars.begin() + m_, vars.end());
    for (const auto& c : body_) {
      long v = c.param * n + c.constant;
      for (std::size_t i = 0; i < d_; ++i) v += c.coeffs[i] * z[i];
      if (c.equality ? v != 0 : v < 0) return true;
    }
    for (const auto& c : write_) {
      long v = c.param * n + c.constant;
      for (std::size_t i = 0; i < vars.size(); ++i) v += c.coeffs[i] * vars[i];
      if (v != 0) return true;
    }
    f(z);
    return true;
  }
  bool has_lo = false, has_hi = false;
  long lo = 0, hi = 0;
  const std::size_t var = m_ + level;
  for (const auto& row : levels_[level]) {
    long rest = row.param * n + row.constant;
    for (std::size_t i = 0; i < var; ++i) rest += row.rest[i] * vars[i];
    // coef * x + rest >= 0 (or = 0)
    if (row.equality) {
      if (rest % row.coef != 0) return true;
      long x = -rest / row.coef;
      if (!has_lo || x > lo) lo = x;
      if (!has_hi || x < hi) hi = x;
      has_lo = has_hi = true;
    } else if (row.coef > 0) {
      long x = ceil_div_l(-rest, row.coef);
      if (!has_lo || x > lo) lo = x;
      has_lo = true;
    } else {
      long x = floor_div_l(rest, -row.coef);
      if (!has_hi || x < hi) hi = x;
      has_hi = true;
    }
  }
  if (!has_lo || !has_hi) throw UnsupportedInput("unbounded fiber");
  for (long x = lo; x <= hi; ++x) {
    vars[var] = x;
    scan(level + 1, vars, n, f);
  }
  return true;
}

void FiberScanner::for_each(const std::vector<long>& p, long n,
                            const std::function<void(const std::vector<long>&)>& f) const {
  if (empty_) return;
  if (p.size() != m_) throw DimensionMismatch("fiber scan: answer arity");
  std::vector<long> vars(m_ + d_);
  for (std::size_t i = 0; i < m_; ++i) vars[i] = p[i];
  scan(0, vars, n, f);
}

std::size_t FiberScanner::count(const std::vector<long>& p, long n) const {
  std::size_t k = 0;
  for_each(p, n, [&](const std::vector<long>&) { ++k; });
  return k;
}

}  // namespace redsimp
