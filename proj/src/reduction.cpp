// SPDX-License-Identifier: Apache-2.0
#include "redsimp/reduction.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "redsimp/lp.hpp"

namespace redsimp {

// ---------------------------------------------------------------- operators

std::optional<Operator> Operator::parse(const std::string& name) {
  Operator op;
  if (name == "sum" || name == "+") op.kind = OpKind::Sum;
  else if (name == "product" || name == "*") op.kind = OpKind::Product;
  else if (name == "max") op.kind = OpKind::Max;
  else if (name == "min") op.kind = OpKind::Min;
  else return std::nullopt;
  return op;
}

std::string Operator::name() const {
  switch (kind) {
    case OpKind::Sum: return "sum";
    case OpKind::Product: return "product";
    case OpKind::Max: return "max";
    case OpKind::Min: return "min";
  }
  return "?";
}

bool Operator::has_inverse() const {
  return kind == OpKind::Sum || (kind == OpKind::Product && product_invertible);
}

std::string Operator::identity_string() const {
  switch (kind) {
    case OpKind::Sum: return "0";
    case OpKind::Product: return "1";
    case OpKind::Max: return "-inf";
    case OpKind::Min: return "+inf";
  }
  return "?";
}

std::string Operator::c_symbol() const {
  switch (kind) {
    case OpKind::Sum: return "+";
    case OpKind::Product: return "*";
    case OpKind::Max: return "max";
    case OpKind::Min: return "min";
  }
  return "?";
}

bool Operator::is_identity(const Value& v) const {
  if (v.empty) return true;
  if (kind == OpKind::Sum) return v.q == 0;
  if (kind == OpKind::Product) return v.q == 1;
  return false;
}

Value Operator::apply(const Value& a, const Value& b) const {
  if (a.empty) return b;
  if (b.empty) return a;
  switch (kind) {
    case OpKind::Sum: return Value::of(a.q + b.q);
    case OpKind::Product: return Value::of(a.q * b.q);
    case OpKind::Max: return Value::of(a.q < b.q ? b.q : a.q);
    case OpKind::Min: return Value::of(b.q < a.q ? b.q : a.q);
  }
  return a;
}

Value Operator::inverse(const Value& a, const Value& b) const {
  if (!has_inverse()) throw InvariantViolation("inverse of " + name());
  if (b.empty) return a;
  if (kind == OpKind::Sum) {
    Rational base = a.empty ? Rational(0) : a.q;
    return Value::of(base - b.q);
  }
  if (sgn(b.q) == 0) throw UnsupportedInput("division by a zero input");
  Rational base = a.empty ? Rational(1) : a.q;
  return Value::of(base / b.q);
}

std::string to_string(const Value& v, const Operator& op) {
  return v.empty ? op.identity_string() : v.q.get_str();
}

// ---------------------------------------------------------------- reductions

namespace {

std::string map_key(const AffineMap& m) {
  std::ostringstream os;
  os << m.out_dim() << "x" << m.in_dim() << ":";
  for (std::size_t r = 0; r < m.out_dim(); ++r) {
    for (std::size_t c = 0; c < m.in_dim(); ++c) os << m.matrix.at(r, c) << ",";
    os << m.param_col[r] << "," << m.const_col[r] << ";";
  }
  return os.str();
}

}  // namespace

std::string Reduction::key() const {
  std::string prod = op.kind == OpKind::Product && op.product_invertible ? "!" : "";
  return op.name() + prod + "|" + source + "|" + body.key() + "|" + map_key(write) +
         "|" + map_key(read);
}

std::string Reduction::str(const std::vector<std::string>& names) const {
  return "reduce(" + op.name() + ", " + write.str(names) + ", " + source +
         read.str(names).substr(read.str(names).find(" -> ") + 4) + ") over " +
         body.str(names);
}

Reduction make_reduction(Polyhedron body, AffineMap write, AffineMap read,
                         Operator op, std::string source,
                         bool require_accumulation) {
  const std::size_t d = body.dim();
  if (write.in_dim() != d)
    throw DimensionMismatch("write map takes " + std::to_string(write.in_dim()) +
                            " indices, body has " + std::to_string(d));
  if (read.in_dim() != d)
    throw DimensionMismatch("read map takes " + std::to_string(read.in_dim()) +
                            " indices, body has " + std::to_string(d));
  Reduction r;
  r.acc_space = null_space(write.matrix);
  r.reuse_space = null_space(read.matrix);
  if (require_accumulation) {
    if (body.is_empty()) throw UnsupportedInput("reduction body is empty");
    if (r.acc_space.dim() == 0)
      throw UnsupportedInput("write map has full rank: nothing to reduce");
  }
  r.body = std::move(body);
  r.write = std::move(write);
  r.read = std::move(read);
  r.op = op;
  r.source = std::move(source);
  return r;
}

// ---------------------------------------------------------------- reindexing

AffineMap Reindexing::as_map() const {
  const std::size_t d = to_dim(), k = from_dim();
  RatMatrix m(d, k);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < k; ++c) m.at(r, c) = Rational(basis[r][c]);
  return AffineMap(std::move(m), to_rational(offset_param), to_rational(offset_const));
}

bool Reindexing::is_identity() const {
  if (from_dim() != to_dim()) return false;
  for (std::size_t r = 0; r < to_dim(); ++r) {
    if (offset_param[r] != 0 || offset_const[r] != 0) return false;
    for (std::size_t c = 0; c < from_dim(); ++c)
      if (basis[r][c] != (r == c ? 1 : 0)) return false;
  }
  return true;
}

Reindexing identity_reindexing(std::size_t d) {
  return Reindexing{int_identity(d), IntVector(d), IntVector(d)};
}

Reduction reindex(const Reduction& r, const Reindexing& t) {
  AffineMap m = t.as_map();
  return make_reduction(r.body.preimage(m, t.from_dim()), r.write.compose(m),
                        r.read.compose(m), r.op, r.source, false);
}

namespace {

Reindexing from_map(const AffineMap& m) {
  Reindexing t;
  const std::size_t d = m.out_dim(), k = m.in_dim();
  t.basis.assign(d, IntVector(k));
  t.offset_param.assign(d, 0);
  t.offset_const.assign(d, 0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      if (m.matrix.at(r, c).get_den() != 1)
        throw UnsupportedInput("no integral parametrization");
      t.basis[r][c] = m.matrix.at(r, c).get_num();
    }
    if (m.param_col[r].get_den() != 1 || m.const_col[r].get_den() != 1)
      throw UnsupportedInput("no integral parametrization");
    t.offset_param[r] = m.param_col[r].get_num();
    t.offset_const[r] = m.const_col[r].get_num();
  }
  return t;
}

// Eliminate variables with unit coefficients one equality at a time.
std::optional<AffineMap> greedy_parametrization(const Polyhedron& p) {
  AffineMap m = AffineMap::identity(p.dim());
  for (const auto& c : p.constraints()) {
    if (!c.equality) continue;
    Constraint e = c.pullback(m);
    if (e.linear_is_zero()) {
      if (e.param != 0 || e.constant != 0) return std::nullopt;
      continue;
    }
    const std::size_t k = m.in_dim();
    std::size_t t = k;
    for (std::size_t s = k; s-- > 0;)
      if (abs(e.coeffs[s]) == 1) {
        t = s;
        break;
      }
    if (t == k) return std::nullopt;
    // y_t = -(sum_{s != t} e_s y_s + e_N N + e_0) / e_t
    RatMatrix sub(k, k - 1);
    RatVector pc(k), cc(k);
    Rational inv = Rational(1) / Rational(e.coeffs[t]);
    for (std::size_t s = 0, col = 0; s < k; ++s) {
      if (s == t) continue;
      sub.at(s, col) = 1;
      sub.at(t, col) = -Rational(e.coeffs[s]) * inv;
      ++col;
    }
    pc[t] = -Rational(e.param) * inv;
    cc[t] = -Rational(e.constant) * inv;
    m = m.compose(AffineMap(std::move(sub), std::move(pc), std::move(cc)));
  }
  return m;
}

AffineMap hermite_parametrization(const Polyhedron& p) {
  const std::size_t d = p.dim();
  IntMatrix e;
  RatVector rhs_n, rhs_c;
  for (const auto& c : p.constraints()) {
    if (!c.equality) continue;
    e.push_back(c.coeffs);
    rhs_n.push_back(-Rational(c.param));
    rhs_c.push_back(-Rational(c.constant));
  }
  ColumnReduction cr = column_reduce(e, d);
  const std::size_t rk = cr.rank;
  RatMatrix h(e.size(), rk);
  for (std::size_t r = 0; r < e.size(); ++r)
    for (std::size_t c = 0; c < rk; ++c) h.at(r, c) = Rational(cr.h[r][c]);
  auto wn = solve_linear(h, rhs_n);
  auto wc = solve_linear(h, rhs_c);
  if (!wn || !wc) throw UnsupportedInput("inconsistent equalities");
  RatMatrix basis(d, d - rk);
  RatVector pc(d), cc(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = rk; c < d; ++c) basis.at(r, c - rk) = Rational(cr.v[r][c]);
    for (std::size_t c = 0; c < rk; ++c) {
      pc[r] += Rational(cr.v[r][c]) * (*wn)[c];
      cc[r] += Rational(cr.v[r][c]) * (*wc)[c];
    }
  }
  return AffineMap(std::move(basis), std::move(pc), std::move(cc));
}

}  // namespace

std::optional<std::pair<Reduction, Reindexing>> reparametrize(const Reduction& r) {
  if (r.body.num_equalities() == 0) return std::nullopt;
  auto g = greedy_parametrization(r.body);
  AffineMap m = g ? *g : hermite_parametrization(r.body);
  Reindexing t = from_map(m);
  return std::make_pair(reindex(r, t), t);
}

std::pair<Reduction, Reindexing> canonicalize_axes(const Reduction& r) {
  const std::size_t d = r.d();
  if (intersect_subspaces(r.acc_space, r.reuse_space).dim() != 0)
    throw UnsupportedInput("accumulation and reuse spaces intersect");
  std::vector<IntVector> cols = integer_kernel(r.read.matrix);
  for (auto& c : integer_kernel(r.write.matrix)) cols.push_back(c);
  for (auto& c : cols) c = canonical_direction(to_rational(c));
  auto u = complete_with_units(cols, d);
  if (!u) throw UnsupportedInput("no unimodular completion for the canonical axes");
  Reindexing t{*u, IntVector(d), IntVector(d)};
  return {reindex(r, t), t};
}

// ---------------------------------------------------------------- families

std::string IndependentFamily::describe() const {
  std::string s = "family over " + std::to_string(context_dim) + " dim";
  s += context_dim == 1 ? "" : "s";
  s += ", s = ";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < context_dim; ++i) names.push_back("c" + std::to_string(i));
  s += s_of_context.row_strings(names)[0];
  return s;
}

namespace {

struct MemberRow {
  RatVector member;   // coefficients on (u, v)
  RatVector context;  // coefficients on c, then N, then 1
  bool equality;
};

Rational lp_min(const Polyhedron& p, const RatVector& obj_with_n) {
  std::vector<LinRow> rows;
  const std::size_t d = p.dim();
  for (const auto& c : p.constraints()) {
    LinRow row;
    row.a = to_rational(c.coeffs);
    row.a.push_back(Rational(c.param));
    row.b = Rational(c.constant);
    row.equality = c.equality;
    rows.push_back(row);
  }
  LinRow nb;
  nb.a.assign(d + 1, 0);
  nb.a[d] = 1;
  nb.b = -p.param_lower_bound();
  rows.push_back(nb);
  RatVector neg;
  for (const auto& q : obj_with_n) neg.push_back(-q);
  LpResult res = lp_maximize(d + 1, rows, neg);
  if (res.status != LpStatus::Optimal) throw UnsupportedInput("member parameter unbounded");
  return -res.value;
}

}  // namespace

std::vector<IndependentFamily> factor_independent(const Reduction& r) {
  std::vector<IndependentFamily> out;
  const std::size_t d = r.d(), a = r.a(), rr = r.r();
  if (r.body.num_equalities() != 0) return out;
  if (a + rr > d || a == 0) return out;
  if (intersect_subspaces(r.acc_space, r.reuse_space).dim() != 0) return out;
  auto [canon, u] = canonicalize_axes(r);
  const std::size_t nc = d - a - rr, md = a + rr;
  const AffineMap umap = u.as_map();

  std::vector<MemberRow> rows;
  std::vector<Constraint> context_only;
  for (const auto& c : canon.body.constraints()) {
    MemberRow row;
    row.equality = c.equality;
    for (std::size_t k = 0; k < nc; ++k) row.context.push_back(Rational(c.coeffs[k]));
    row.context.push_back(Rational(c.param));
    row.context.push_back(Rational(c.constant));
    for (std::size_t k = nc; k < d; ++k) row.member.push_back(Rational(c.coeffs[k]));
    if (is_zero(row.member)) {
      context_only.push_back(c);
      continue;
    }
    rows.push_back(row);
  }

  // Translation T (md x (nc+2)) candidates: zero, then solving subsets.
  std::vector<RatMatrix> translations;
  translations.emplace_back(md, nc + 2);
  std::vector<std::size_t> idx(md);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                           std::size_t depth) {
    if (depth == md) {
      RatMatrix as(md, md);
      for (std::size_t i = 0; i < md; ++i)
        for (std::size_t j = 0; j < md; ++j) as.at(i, j) = rows[idx[i]].member[j];
      if (rank(as) != md) return;
      for (int with_const = 1; with_const >= 0; --with_const) {
        RatMatrix t(md, nc + 2);
        bool ok = true;
        for (std::size_t col = 0; col < nc + 2 && ok; ++col) {
          if (!with_const && col == nc + 1) continue;
          RatVector rhs(md);
          for (std::size_t i = 0; i < md; ++i) rhs[i] = -rows[idx[i]].context[col];
          auto sol = solve_linear(as, rhs);
          if (!sol) {
            ok = false;
            break;
          }
          for (std::size_t i = 0; i < md; ++i) {
            if ((*sol)[i].get_den() != 1) ok = false;
            t.at(i, col) = (*sol)[i];
          }
        }
        if (ok) {
          translations.push_back(t);
          break;
        }
      }
      return;
    }
    for (std::size_t k = start; k < rows.size(); ++k) {
      idx[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);

  std::set<std::string> seen;
  for (const auto& t : translations) {
    // Offsets of member rows after translation.
    std::vector<RatVector> gamma;
    for (const auto& row : rows) {
      RatVector g = row.context;
      for (std::size_t col = 0; col < nc + 2; ++col)
        for (std::size_t j = 0; j < md; ++j) g[col] += row.member[j] * t.at(j, col);
      gamma.push_back(g);
    }
    std::vector<RatVector> cn;
    for (const auto& g : gamma) cn.emplace_back(g.begin(), g.begin() + nc + 1);
    if (rank(cn, nc + 1) > 1) continue;
    RatVector sigma(nc + 1);
    for (const auto& v : cn)
      if (!is_zero(v)) {
        IntVector pv = primitive_integer(v);
        sigma = to_rational(pv);
        break;
      }
    if (is_zero(sigma)) sigma[nc] = 1;

    // Embedding (c, u', v') -> z.
    RatMatrix em(d, d);
    RatVector ep(d), ec(d);
    for (std::size_t row = 0; row < d; ++row) {
      for (std::size_t col = 0; col < nc; ++col) {
        Rational v = Rational(u.basis[row][col]);
        for (std::size_t j = 0; j < md; ++j) v += Rational(u.basis[row][nc + j]) * t.at(j, col);
        em.at(row, col) = v;
      }
      for (std::size_t j = 0; j < md; ++j) em.at(row, nc + j) = Rational(u.basis[row][nc + j]);
      for (std::size_t j = 0; j < md; ++j) {
        ep[row] += Rational(u.basis[row][nc + j]) * t.at(j, nc);
        ec[row] += Rational(u.basis[row][nc + j]) * t.at(j, nc + 1);
      }
    }
    AffineMap emb(em, ep, ec);
    Polyhedron lifted = r.body.preimage(emb, d);

    // Orientation of s: bounded below over the body.
    RatVector obj(d + 1);
    for (std::size_t k = 0; k < nc; ++k) obj[k] = sigma[k];
    obj[d] = sigma[nc];
    Rational smin;
    try {
      smin = lp_min(lifted, obj);
    } catch (const UnsupportedInput&) {
      for (auto& q : sigma) q = -q;
      for (auto& q : obj) q = -q;
      try {
        smin = lp_min(lifted, obj);
      } catch (const UnsupportedInput&) {
        continue;
      }
    }
    long lb = to_long(ceil_of(smin));

    // Member constraints: member part, lambda * s, constant.
    std::vector<Constraint> mcons;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const RatVector& g = gamma[k];
      Rational lambda = 0;
      for (std::size_t col = 0; col <= nc; ++col)
        if (sgn(sigma[col]) != 0) {
          lambda = g[col] / sigma[col];
          break;
        }
      mcons.push_back(Constraint::from_rational(rows[k].member, lambda, g[nc + 1],
                                                rows[k].equality));
    }
    Polyhedron mbody(md, mcons, lb);
    if (mbody.is_empty()) continue;

    IndependentFamily fam;
    fam.context_dim = nc;
    for (std::size_t k = 0; k < nc; ++k) fam.free_dims.push_back(k);
    fam.source = r.source;
    std::vector<std::size_t> us, vs;
    for (std::size_t k = 0; k < rr; ++k) us.push_back(k);
    for (std::size_t k = 0; k < a; ++k) vs.push_back(rr + k);
    fam.member = make_reduction(mbody, AffineMap::select(md, us),
                                AffineMap::select(md, vs), r.op, "X", false);
    fam.embedding = emb;

    std::vector<std::size_t> cs;
    for (std::size_t k = 0; k < nc; ++k) cs.push_back(k);
    fam.context = nc ? project(lifted, AffineMap::select(d, cs))
                     : Polyhedron::universe(0, r.param_lb());

    // p = F emb (c, u', v'); columns for v' vanish.
    AffineMap wf = r.write.compose(emb);
    const std::size_t m = wf.out_dim();
    if (m != nc + rr) continue;
    RatMatrix phi(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) phi.at(i, j) = wf.matrix.at(i, j);
    RatMatrix inv(m, m);
    bool invertible = true;
    for (std::size_t j = 0; j < m && invertible; ++j) {
      auto col = solve_linear(phi, unit_vector(m, j));
      if (!col) invertible = false;
      else
        for (std::size_t i = 0; i < m; ++i) inv.at(i, j) = (*col)[i];
    }
    if (!invertible) continue;
    RatVector ip = inv.apply(wf.param_col), ic = inv.apply(wf.const_col);
    for (auto& q : ip) q = -q;
    for (auto& q : ic) q = -q;
    fam.answer_to_member = AffineMap(inv, ip, ic);

    RatMatrix sm(1, nc);
    for (std::size_t k = 0; k < nc; ++k) sm.at(0, k) = sigma[k];
    fam.s_of_context = AffineMap(sm, RatVector{sigma[nc]}, RatVector{0});

    AffineMap rf = r.read.compose(emb);
    RatMatrix im(rf.out_dim(), nc + a);
    for (std::size_t i = 0; i < rf.out_dim(); ++i) {
      for (std::size_t k = 0; k < nc; ++k) im.at(i, k) = rf.matrix.at(i, k);
      for (std::size_t k = 0; k < a; ++k) im.at(i, nc + k) = rf.matrix.at(i, nc + rr + k);
    }
    fam.input_embed = AffineMap(im, rf.param_col, rf.const_col);
    fam.trivial = nc == 0 && u.is_identity() && is_zero(ep) && is_zero(ec) &&
                  sigma[nc] == 1 && lb == r.param_lb();
    if (!seen.insert(fam.member.key()).second) continue;
    out.push_back(std::move(fam));
  }
  return out;
}

}  // namespace redsimp
