// SPDX-License-Identifier: Apache-2.0
#include "redsimp/polyhedra.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "redsimp/lp.hpp"

namespace redsimp {

// ---------------------------------------------------------------- Constraint

Constraint Constraint::from_rational(const RatVector& c, const Rational& p,
                                     const Rational& k, bool eq) {
  Int l = 1;
  auto fold = [&](const Rational& q) { l = lcm(l, Int(q.get_den())); };
  for (const auto& q : c) fold(q);
  fold(p);
  fold(k);
  Constraint out;
  out.equality = eq;
  for (const auto& q : c) out.coeffs.push_back(Int(q * l));
  out.param = Int(p * l);
  out.constant = Int(k * l);
  out.normalize();
  return out;
}

bool Constraint::linear_is_zero() const {
  for (const auto& c : coeffs)
    if (c != 0) return false;
  return true;
}

bool Constraint::normalize() {
  Int g = abs(param);
  for (const auto& c : coeffs) g = gcd(g, c);
  if (g == 0) {
    bool ok = equality ? constant == 0 : constant >= 0;
    constant = ok ? 0 : -1;
    return ok;
  }
  if (equality) {
    if (constant % g != 0) {
      for (auto& c : coeffs) c = 0;
      param = 0;
      constant = -1;
      return false;
    }
    for (auto& c : coeffs) c /= g;
    param /= g;
    constant /= g;
    int s = 0;
    for (const auto& c : coeffs)
      if (c != 0) {
        s = sgn(c);
        break;
      }
    if (s == 0) s = sgn(param);
    if (s < 0) {
      for (auto& c : coeffs) c = -c;
      param = -param;
      constant = -constant;
    }
    return true;
  }
  for (auto& c : coeffs) c /= g;
  param /= g;
  constant = floor_div(constant, g);
  return true;
}

bool Constraint::trivially_true() const {
  if (!linear_is_zero() || param != 0) return false;
  return equality ? constant == 0 : constant >= 0;
}

Int Constraint::eval(const std::vector<long>& z, long n) const {
  Int v = constant + param * n;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) v += coeffs[i] * z[i];
  return v;
}

Rational Constraint::eval(const RatVector& z, const Rational& n) const {
  Rational v = Rational(constant) + Rational(param) * n;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) v += Rational(coeffs[i]) * z[i];
  return v;
}

ParamAffine Constraint::eval(const std::vector<ParamAffine>& z) const {
  ParamAffine v{Rational(constant), Rational(param)};
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) v = v + z[i] * Rational(coeffs[i]);
  return v;
}

Constraint Constraint::complement() const {
  Constraint c = opposite();
  c.equality = false;
  c.constant -= 1;
  return c;
}

Constraint Constraint::opposite() const {
  Constraint c = *this;
  for (auto& x : c.coeffs) x = -x;
  c.param = -c.param;
  c.constant = -c.constant;
  if (c.equality) c.normalize();
  return c;
}

Constraint Constraint::translated(const IntVector& shift) const {
  Constraint c = *this;
  for (std::size_t i = 0; i < coeffs.size(); ++i) c.constant -= coeffs[i] * shift.at(i);
  return c;
}

Constraint Constraint::pullback(const AffineMap& map) const {
  if (map.out_dim() != coeffs.size())
    throw DimensionMismatch("pullback: map arity");
  RatVector lin(map.in_dim());
  Rational p = Rational(param);
  Rational k = Rational(constant);
  for (std::size_t r = 0; r < coeffs.size(); ++r) {
    if (coeffs[r] == 0) continue;
    Rational a(coeffs[r]);
    for (std::size_t c = 0; c < map.in_dim(); ++c) lin[c] += a * map.matrix.at(r, c);
    p += a * map.param_col[r];
    k += a * map.const_col[r];
  }
  return from_rational(lin, p, k, equality);
}

Constraint Constraint::with_equality(bool eq) const {
  Constraint c = *this;
  c.equality = eq;
  c.normalize();
  return c;
}

bool Constraint::operator<(const Constraint& o) const {
  if (equality != o.equality) return equality;
  if (coeffs != o.coeffs) return coeffs < o.coeffs;
  if (param != o.param) return param < o.param;
  return constant < o.constant;
}

std::string Constraint::str(const std::vector<std::string>& names) const {
  return affine_string(linear(), Rational(param), Rational(constant), names) +
         (equality ? " = 0" : " >= 0");
}

RatVector ParamVertex::at(const Rational& n) const {
  RatVector v;
  for (const auto& c : coords) v.push_back(c.at(n));
  return v;
}

// ---------------------------------------------------------------- LP helpers

namespace {

// Rows over (z, N).
LinRow lifted_row(const Constraint& c) {
  LinRow r;
  r.a = to_rational(c.coeffs);
  r.a.push_back(Rational(c.param));
  r.b = Rational(c.constant);
  r.equality = c.equality;
  return r;
}

std::vector<LinRow> lifted_rows(std::size_t dim, const std::vector<Constraint>& cs,
                                long lb) {
  std::vector<LinRow> rows;
  rows.reserve(cs.size() + 1);
  for (const auto& c : cs) rows.push_back(lifted_row(c));
  LinRow n;
  n.a.assign(dim + 1, 0);
  n.a[dim] = 1;
  n.b = -lb;
  rows.push_back(n);
  return rows;
}

struct SimplifyResult {
  std::vector<Constraint> cons;
  bool empty = false;
};

SimplifyResult simplify_constraints(std::size_t dim, std::vector<Constraint> input,
                                    long lb) {
  SimplifyResult res;
  std::vector<Constraint> eqs;
  std::vector<Constraint> ineqs;
  for (auto& c : input) {
    if (c.coeffs.size() != dim) throw DimensionMismatch("constraint arity");
    if (!c.normalize()) {
      res.empty = true;
      return res;
    }
    if (c.trivially_true()) continue;
    auto& bucket = c.equality ? eqs : ineqs;
    if (std::find(bucket.begin(), bucket.end(), c) == bucket.end()) bucket.push_back(c);
  }
  auto all_rows = [&]() {
    std::vector<Constraint> all = eqs;
    all.insert(all.end(), ineqs.begin(), ineqs.end());
    return lifted_rows(dim, all, lb);
  };
  LpResult first = lp_maximize(dim + 1, all_rows(), RatVector());
  if (first.status == LpStatus::Infeasible) {
    res.empty = true;
    return res;
  }

  // Implicit equalities.
  for (std::size_t i = 0; i < ineqs.size();) {
    const Constraint& c = ineqs[i];
    RatVector z(first.x.begin(), first.x.end() - 1);
    if (c.eval(z, first.x.back()) >= 1) {
      ++i;
      continue;
    }
    auto rows = all_rows();
    LinRow probe = lifted_row(c);
    probe.b -= 1;
    rows.push_back(probe);
    if (lp_feasible(dim + 1, rows)) {
      ++i;
      continue;
    }
    Constraint e = c.with_equality(true);
    ineqs.erase(ineqs.begin() + i);
    if (std::find(eqs.begin(), eqs.end(), e) == eqs.end()) eqs.push_back(e);
  }

  // Independent equalities only.
  {
    std::vector<Constraint> kept;
    std::vector<RatVector> rows;
    for (const auto& e : eqs) {
      RatVector r = to_rational(e.coeffs);
      r.push_back(Rational(e.param));
      r.push_back(Rational(e.constant));
      rows.push_back(r);
      if (rank(rows, dim + 2) == rows.size()) {
        kept.push_back(e);
      } else {
        rows.pop_back();
      }
    }
    eqs = std::move(kept);
  }

  // Redundant inequalities, tested in input order against the survivors.
  for (std::size_t i = 0; i < ineqs.size();) {
    std::vector<Constraint> others = eqs;
    for (std::size_t j = 0; j < ineqs.size(); ++j)
      if (j != i) others.push_back(ineqs[j]);
    auto rows = lifted_rows(dim, others, lb);
    rows.push_back(lifted_row(ineqs[i].complement()));
    if (lp_feasible(dim + 1, rows)) {
      ++i;
    } else {
      ineqs.erase(ineqs.begin() + i);
    }
  }
  res.cons = std::move(eqs);
  res.cons.insert(res.cons.end(), ineqs.begin(), ineqs.end());
  return res;
}

std::string raw_key(std::size_t dim, const std::vector<Constraint>& cs, long lb) {
  std::string k = std::to_string(dim) + "|" + std::to_string(lb);
  for (const auto& c : cs) {
    k += c.equality ? "|=" : "|>";
    for (const auto& x : c.coeffs) k += x.get_str() + ",";
    k += c.param.get_str() + "," + c.constant.get_str();
  }
  return k;
}

std::mutex g_cache_mutex;
std::unordered_map<std::string, SimplifyResult>& simplify_cache() {
  static std::unordered_map<std::string, SimplifyResult> cache;
  return cache;
}

}  // namespace

// ---------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(std::size_t dim, std::vector<Constraint> cons, long param_lb)
    : dim_(dim), lb_(param_lb) {
  std::string k = raw_key(dim, cons, param_lb);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = simplify_cache().find(k);
    if (it != simplify_cache().end()) {
      cons_ = it->second.cons;
      empty_ = it->second.empty;
      return;
    }
  }
  SimplifyResult r = simplify_constraints(dim, std::move(cons), param_lb);
  cons_ = r.cons;
  empty_ = r.empty;
  if (empty_) cons_.clear();
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  if (simplify_cache().size() > 200000) simplify_cache().clear();
  simplify_cache().emplace(std::move(k), std::move(r));
}

Polyhedron Polyhedron::universe(std::size_t dim, long param_lb) {
  return Polyhedron(dim, {}, param_lb);
}

Polyhedron Polyhedron::empty_set(std::size_t dim, long param_lb) {
  Polyhedron p;
  p.dim_ = dim;
  p.lb_ = param_lb;
  p.empty_ = true;
  return p;
}

std::size_t Polyhedron::num_equalities() const {
  std::size_t n = 0;
  for (const auto& c : cons_)
    if (c.equality) ++n;
  return n;
}

Polyhedron Polyhedron::intersect(const Polyhedron& o) const {
  if (o.dim_ != dim_) throw DimensionMismatch("intersect: dimension");
  long lb = std::max(lb_, o.lb_);
  if (empty_ || o.empty_) return empty_set(dim_, lb);
  std::vector<Constraint> cs = cons_;
  cs.insert(cs.end(), o.cons_.begin(), o.cons_.end());
  return Polyhedron(dim_, std::move(cs), lb);
}

Polyhedron Polyhedron::with(const Constraint& c) const {
  return with(std::vector<Constraint>{c});
}

Polyhedron Polyhedron::with(const std::vector<Constraint>& extra) const {
  if (empty_) return *this;
  std::vector<Constraint> cs = cons_;
  cs.insert(cs.end(), extra.begin(), extra.end());
  return Polyhedron(dim_, std::move(cs), lb_);
}

Polyhedron Polyhedron::with_param_lower_bound(long lb) const {
  if (empty_) return empty_set(dim_, lb);
  return Polyhedron(dim_, cons_, lb);
}

Polyhedron Polyhedron::translated(const IntVector& shift) const {
  if (empty_) return *this;
  std::vector<Constraint> cs;
  for (const auto& c : cons_) cs.push_back(c.translated(shift));
  return Polyhedron(dim_, std::move(cs), lb_);
}

Polyhedron Polyhedron::preimage(const AffineMap& map, std::size_t in_dim) const {
  if (map.in_dim() != in_dim || map.out_dim() != dim_)
    throw DimensionMismatch("preimage: map arity");
  if (empty_) return empty_set(in_dim, lb_);
  std::vector<Constraint> cs;
  for (const auto& c : cons_) cs.push_back(c.pullback(map));
  return Polyhedron(in_dim, std::move(cs), lb_);
}

bool Polyhedron::contains(const std::vector<long>& z, long n) const {
  if (empty_) return false;
  for (const auto& c : cons_) {
    Int v = c.eval(z, n);
    if (c.equality ? v != 0 : v < 0) return false;
  }
  return true;
}

bool Polyhedron::contains(const RatVector& z, const Rational& n) const {
  if (empty_) return false;
  for (const auto& c : cons_) {
    Rational v = c.eval(z, n);
    if (c.equality ? sgn(v) != 0 : sgn(v) < 0) return false;
  }
  return true;
}

bool Polyhedron::contains(const Polyhedron& o) const {
  if (o.empty_) return true;
  if (empty_) return false;
  for (const auto& c : cons_) {
    if (c.equality) {
      Constraint lo = c.with_equality(false).complement();
      Constraint hi = c.with_equality(false);
      hi.constant -= 1;
      if (!o.with(lo).is_empty() || !o.with(hi).is_empty()) return false;
    } else if (!o.with(c.complement()).is_empty()) {
      return false;
    }
  }
  return true;
}

LinearSubspace Polyhedron::linear_space() const {
  RatMatrix m(num_equalities(), dim_);
  std::size_t r = 0;
  for (const auto& c : cons_) {
    if (!c.equality) continue;
    for (std::size_t j = 0; j < dim_; ++j) m.at(r, j) = c.coeffs[j];
    ++r;
  }
  return null_space(m);
}

std::size_t Polyhedron::affine_dim() const { return linear_space().dim(); }

int Polyhedron::asymptotic_degree() const {
  if (empty_) return -1;
  // Limit shape: coeffs·z + param >= 0.
  std::vector<LinRow> rows;
  for (const auto& c : cons_) {
    LinRow r;
    r.a = to_rational(c.coeffs);
    r.b = Rational(c.param);
    r.equality = c.equality;
    rows.push_back(r);
  }
  if (!lp_feasible(dim_, rows)) return 0;
  std::vector<RatVector> eq;
  for (const auto& c : cons_)
    if (c.equality) eq.push_back(to_rational(c.coeffs));
  for (std::size_t i = 0; i < cons_.size(); ++i) {
    if (cons_[i].equality) continue;
    LpResult res = lp_maximize(dim_, rows, to_rational(cons_[i].coeffs));
    if (res.status == LpStatus::Optimal && sgn(res.value + Rational(cons_[i].param)) == 0)
      eq.push_back(to_rational(cons_[i].coeffs));
  }
  return static_cast<int>(dim_ - rank(eq, dim_));
}

std::string Polyhedron::key() const {
  std::vector<Constraint> sorted = cons_;
  std::sort(sorted.begin(), sorted.end());
  return (empty_ ? "E" : "P") + raw_key(dim_, sorted, lb_);
}

std::string Polyhedron::str(const std::vector<std::string>& names) const {
  std::string s = "{[";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += names.at(i);
  }
  s += "]";
  if (empty_) return s + " : false}";
  for (std::size_t i = 0; i < cons_.size(); ++i) {
    s += i ? ", " : " : ";
    s += cons_[i].str(names);
  }
  return s + "}";
}

// ---------------------------------------------------------------- splitting

std::pair<Polyhedron, Polyhedron> split_by_hyperplane(const Polyhedron& p,
                                                      const Constraint& h) {
  Constraint ge = h.with_equality(false);
  Polyhedron lo = p.with(ge.complement());
  Polyhedron hi = p.with(ge);
  if (lo.is_empty() || hi.is_empty())
    throw NonSeparating("hyperplane " + h.str(default_names(p.dim())) +
                        " does not separate the polyhedron");
  return {lo, hi};
}

PolyUnion set_difference(const Polyhedron& a, const Polyhedron& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("set_difference: dimension");
  PolyUnion out;
  if (a.is_empty()) return out;
  if (b.is_empty()) {
    out.pieces.push_back(a);
    return out;
  }
  std::vector<Constraint> prefix;
  for (const auto& c : b.constraints()) {
    std::vector<Constraint> negs;
    if (c.equality) {
      Constraint ge = c.with_equality(false);
      negs.push_back(ge.complement());
      Constraint pos = ge;
      pos.constant -= 1;
      negs.push_back(pos);
    } else {
      negs.push_back(c.complement());
    }
    for (const auto& n : negs) {
      std::vector<Constraint> cs = prefix;
      cs.push_back(n);
      Polyhedron piece = a.with(cs);
      if (!piece.is_empty()) out.pieces.push_back(piece);
    }
    prefix.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- projection

std::vector<Constraint> drop_variable(const std::vector<Constraint>& cons,
                                      std::size_t var) {
  std::vector<Constraint> out;
  for (auto c : cons) {
    if (c.coeffs.at(var) != 0) throw InvariantViolation("drop_variable: still used");
    c.coeffs.erase(c.coeffs.begin() + var);
    out.push_back(c);
  }
  return out;
}

namespace {

void push_unique(std::vector<Constraint>& v, Constraint c) {
  bool ok = c.normalize();
  if (ok && c.trivially_true()) return;
  if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(std::move(c));
}

// c1 * a + c2 * b, coefficient-wise.
Constraint combine(const Constraint& a, const Int& ca, const Constraint& b,
                   const Int& cb, bool eq) {
  Constraint c;
  c.equality = eq;
  c.coeffs.resize(a.coeffs.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    c.coeffs[i] = ca * a.coeffs[i] + cb * b.coeffs[i];
  c.param = ca * a.param + cb * b.param;
  c.constant = ca * a.constant + cb * b.constant;
  return c;
}

std::vector<Constraint> fm_step(const std::vector<Constraint>& cons, std::size_t var,
                                bool* exact) {
  std::vector<Constraint> out;
  // Prefer an equality with the smallest coefficient on var.
  std::size_t pick = cons.size();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Constraint& c = cons[i];
    if (!c.equality || c.coeffs[var] == 0) continue;
    if (pick == cons.size() || abs(c.coeffs[var]) < abs(cons[pick].coeffs[var])) pick = i;
  }
  if (pick != cons.size()) {
    Constraint e = cons[pick];
    if (e.coeffs[var] < 0) e = combine(e, -1, e, 0, true);
    if (exact && abs(e.coeffs[var]) != 1) *exact = false;
    for (std::size_t i = 0; i < cons.size(); ++i) {
      if (i == pick) continue;
      const Constraint& c = cons[i];
      if (c.coeffs[var] == 0) {
        push_unique(out, c);
        continue;
      }
      push_unique(out, combine(c, e.coeffs[var], e, -c.coeffs[var], c.equality));
    }
    return out;
  }
  std::vector<const Constraint*> lower, upper;
  for (const auto& c : cons) {
    int s = sgn(c.coeffs[var]);
    if (s == 0) {
      push_unique(out, c);
    } else if (s > 0) {
      lower.push_back(&c);
    } else {
      upper.push_back(&c);
    }
  }
  for (const Constraint* l : lower)
    for (const Constraint* u : upper) {
      if (exact && l->coeffs[var] != 1 && u->coeffs[var] != -1) *exact = false;
      push_unique(out, combine(*l, -u->coeffs[var], *u, l->coeffs[var], false));
    }
  return out;
}

// Eliminate variables [keep, total) and return constraints over [0, keep).
std::vector<Constraint> fm_project(std::vector<Constraint> cons, std::size_t keep,
                                   std::size_t total, long lb, bool* exact,
                                   bool* empty) {
  for (std::size_t v = total; v-- > keep;) {
    cons = fm_step(cons, v, exact);
    for (const auto& c : cons)
      if (c.linear_is_zero() && c.param == 0 && !c.trivially_true()) {
        *empty = true;
        return {};
      }
    cons = drop_variable(cons, v);
    if (cons.size() > 2 * v + 2) {
      Polyhedron p(v, cons, lb);
      if (p.is_empty()) {
        *empty = true;
        return {};
      }
      cons = p.constraints();
    }
  }
  return cons;
}

std::vector<Constraint> lifted_graph(const Polyhedron& p, const AffineMap& map) {
  const std::size_t d = p.dim();
  const std::size_t m = map.out_dim();
  std::vector<Constraint> cons;
  for (const auto& c : p.constraints()) {
    Constraint l;
    l.equality = c.equality;
    l.coeffs.assign(m, 0);
    l.coeffs.insert(l.coeffs.end(), c.coeffs.begin(), c.coeffs.end());
    l.param = c.param;
    l.constant = c.constant;
    cons.push_back(l);
  }
  for (std::size_t r = 0; r < m; ++r) {
    RatVector lin(m + d);
    lin[r] = 1;
    for (std::size_t c = 0; c < d; ++c) lin[m + c] = -map.matrix.at(r, c);
    cons.push_back(Constraint::from_rational(lin, -map.param_col[r],
                                             -map.const_col[r], true));
  }
  return cons;
}

}  // namespace

std::vector<Constraint> fm_eliminate(const std::vector<Constraint>& cons,
                                     std::size_t var) {
  return fm_step(cons, var, nullptr);
}

Polyhedron project(const Polyhedron& p, const AffineMap& map) {
  if (map.in_dim() != p.dim()) throw DimensionMismatch("project: map arity");
  const std::size_t m = map.out_dim();
  if (p.is_empty()) return Polyhedron::empty_set(m, p.param_lower_bound());
  bool empty = false;
  auto cons = fm_project(lifted_graph(p, map), m, m + p.dim(),
                         p.param_lower_bound(), nullptr, &empty);
  if (empty) return Polyhedron::empty_set(m, p.param_lower_bound());
  return Polyhedron(m, std::move(cons), p.param_lower_bound());
}

bool projection_is_exact(const Polyhedron& p, const AffineMap& map) {
  if (p.is_empty()) return true;
  const std::size_t m = map.out_dim();
  bool exact = true;
  bool empty = false;
  fm_project(lifted_graph(p, map), m, m + p.dim(), p.param_lower_bound(), &exact,
             &empty);
  return exact;
}

// ---------------------------------------------------------------- points

namespace {

std::vector<std::pair<Int, Int>> bounding_box(const Polyhedron& p, long n) {
  std::vector<LinRow> rows;
  for (const auto& c : p.constraints()) {
    LinRow r;
    r.a = to_rational(c.coeffs);
    r.b = Rational(c.param) * n + Rational(c.constant);
    r.equality = c.equality;
    rows.push_back(r);
  }
  std::vector<std::pair<Int, Int>> box;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    RatVector obj(p.dim());
    obj[i] = 1;
    LpResult hi = lp_maximize(p.dim(), rows, obj);
    if (hi.status == LpStatus::Infeasible) return {};
    obj[i] = -1;
    LpResult lo = lp_maximize(p.dim(), rows, obj);
    if (hi.status == LpStatus::Unbounded || lo.status == LpStatus::Unbounded)
      throw UnsupportedInput("unbounded polyhedron");
    box.emplace_back(ceil_of(-lo.value), floor_of(hi.value));
  }
  return box;
}

}  // namespace

std::vector<std::vector<long>> integer_points(const Polyhedron& p, long n) {
  std::vector<std::vector<long>> out;
  if (p.is_empty() || n < p.param_lower_bound()) return out;
  auto box = bounding_box(p, n);
  if (box.size() != p.dim()) return out;
  std::vector<long> z(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (box[i].first > box[i].second) return out;
    z[i] = to_long(box[i].first);
  }
  if (p.dim() == 0) {
    if (p.contains(z, n)) out.push_back(z);
    return out;
  }
  for (;;) {
    if (p.contains(z, n)) out.push_back(z);
    std::size_t k = p.dim();
    while (k-- > 0) {
      if (z[k] < to_long(box[k].second)) {
        ++z[k];
        break;
      }
      z[k] = to_long(box[k].first);
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::size_t count_points(const Polyhedron& p, long n) {
  return integer_points(p, n).size();
}

std::pair<long, long> structure_samples(long lb) {
  if (lb <= 8) return {8, 13};
  return {lb + 8, lb + 13};
}

}  // namespace redsimp
