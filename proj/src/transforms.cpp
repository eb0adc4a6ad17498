// SPDX-License-Identifier: Apache-2.0
#include "redsimp/transforms.hpp"

#include <algorithm>
#include <set>

#include "redsimp/intlinalg.hpp"

namespace redsimp {

namespace {

Reduction restrict_to(const Reduction& r, const Polyhedron& body) {
  return make_reduction(body, r.write, r.read, r.op, r.source, false);
}

IntVector integral(const RatVector& v, const char* what) {
  IntVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].get_den() != 1) throw UnsupportedInput(std::string(what) + " is not integral");
    out[k] = v[k].get_num();
  }
  return out;
}

AffineMap rows_of(const IntMatrix& m, std::size_t from, std::size_t to, std::size_t cols) {
  RatMatrix out(to - from, cols);
  for (std::size_t r = from; r < to; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.at(r - from, c) = m[r][c];
  return AffineMap::linear(std::move(out));
}

AffineMap cols_of(const IntMatrix& m, std::size_t from, std::size_t to) {
  RatMatrix out(m.size(), to - from);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = from; c < to; ++c) out.at(r, c - from) = m[r][c];
  return AffineMap::linear(std::move(out));
}

IntVector negated(const IntVector& v) {
  IntVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = -v[k];
  return out;
}

Int dot_int(const IntVector& a, const IntVector& b) {
  Int s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

ExprPtr direct_solver(const Reduction& sub) { return make_reduce(sub); }

std::vector<Polyhedron> facet_strips(const Polyhedron& a, const IntVector& shift) {
  std::vector<Polyhedron> out;
  if (a.is_empty()) return out;
  for (const auto& c : a.constraints())
    if (c.equality && dot_int(c.coeffs, shift) != 0) return {a};
  std::vector<Constraint> prefix;
  for (const auto& c : a.constraints()) {
    if (c.equality) continue;
    const Int w = dot_int(c.coeffs, shift);
    if (w > 0) {
      // c(z) < w: the shifted copy of this constraint fails.
      const long wl = to_long(w);
      for (long t = 0; t < wl; ++t) {
        Constraint slice(c.coeffs, c.param, c.constant - t, true);
        std::vector<Constraint> cs = prefix;
        cs.push_back(slice);
        Polyhedron piece = a.with(cs);
        if (!piece.is_empty()) out.push_back(std::move(piece));
      }
    }
    prefix.push_back(c.translated(shift));
  }
  return out;
}

SingleStep single_step_parts(const Reduction& r, const IntVector& rho) {
  if (rho.size() != r.d()) throw DimensionMismatch("reuse vector dimension");
  if (!r.reuse_space.contains(to_rational(rho)))
    throw UnsupportedInput("direction is not a reuse vector");
  SingleStep s;
  s.rho = rho;
  s.delta = integral(r.write.apply_linear(to_rational(rho)), "write(rho)");
  if (std::all_of(s.delta.begin(), s.delta.end(), [](const Int& x) { return x == 0; }))
    throw UnsupportedInput("reuse vector lies in the accumulation space");
  const std::size_t d = r.d();
  s.answers = project(r.body, r.write);
  for (auto& g : facet_strips(s.answers, s.delta)) {
    Polyhedron body = r.body.intersect(g.preimage(r.write, d));
    if (body.is_empty()) continue;
    s.init_guards.push_back(g);
    s.init.push_back(restrict_to(r, body));
  }
  s.rec_guard = s.answers.intersect(s.answers.translated(s.delta));
  if (s.rec_guard.is_empty()) return s;
  const Polyhedron pre = s.rec_guard.preimage(r.write, d);
  for (auto& piece : facet_strips(r.body, rho)) {
    Polyhedron q = piece.intersect(pre);
    if (!q.is_empty()) s.entry.push_back(restrict_to(r, q));
  }
  for (auto& piece : facet_strips(r.body.translated(rho), negated(rho))) {
    Polyhedron q = piece.intersect(pre);
    if (!q.is_empty()) s.exit.push_back(restrict_to(r, q));
  }
  return s;
}

Equation build_single_step(const Reduction& r, const SingleStep& s, const std::string& var,
                           const SubSolver& solve) {
  const std::size_t m = r.answer_dim();
  Equation eq;
  eq.var = var;
  eq.dim = m;
  eq.op = r.op;
  eq.domain = s.answers;
  for (std::size_t k = 0; k < s.init.size(); ++k)
    eq.branches.push_back({s.init_guards[k], solve(s.init[k])});
  if (!s.rec_guard.is_empty()) {
    if (!s.exit.empty() && !r.op.has_inverse())
      throw UnsupportedInput("recurrence needs the inverse of " + r.op.name());
    AffineMap back = AffineMap::identity(m);
    for (std::size_t k = 0; k < m; ++k) back.const_col[k] = -s.delta[k];
    std::vector<ExprPtr> parts{make_ref(var, back)};
    for (const auto& e : s.entry) parts.push_back(solve(e));
    std::vector<ExprPtr> removed;
    for (const auto& e : s.exit) removed.push_back(solve(e));
    ExprPtr rec = make_inverse(r.op, make_combine(r.op, std::move(parts)), std::move(removed));
    eq.branches.push_back({s.rec_guard, rec});
  }
  return eq;
}

namespace {

EquationProgram single_equation_program(const Reduction& r, Equation eq) {
  EquationProgram p;
  p.output = eq.var;
  p.inputs[r.source] = r.read.out_dim();
  p.param_lb = r.param_lb();
  p.equations.push_back(std::move(eq));
  return p;
}

}  // namespace

EquationProgram single_step_simplify(const Reduction& r, const Labeling& l,
                                     const std::string& var) {
  SingleStep s = single_step_parts(r, l.witness);
  return single_equation_program(r, build_single_step(r, s, var, direct_solver));
}

std::optional<Collapse> collapse_copy(const Reduction& r, const SingleStep& s) {
  if (!s.pure_copy()) return std::nullopt;
  const std::size_t d = r.d();
  const std::size_t m = r.answer_dim();
  if (m < 2 || d < 2) return std::nullopt;
  if (primitive_integer(to_rational(s.delta)) != s.delta &&
      primitive_integer(to_rational(negated(s.delta))) != negated(s.delta))
    return std::nullopt;
  auto v = complete_with_units({s.rho}, d);
  auto u = complete_with_units({s.delta}, m);
  if (!v || !u) return std::nullopt;
  const IntMatrix vinv = unimodular_inverse(*v);
  const IntMatrix uinv = unimodular_inverse(*u);
  const AffineMap proj = rows_of(vinv, 0, d - 1, d);
  if (!projection_is_exact(r.body, proj)) return std::nullopt;
  const AffineMap lift = cols_of(*v, 0, d - 1);
  Collapse c;
  c.pi = rows_of(uinv, 0, m - 1, m);
  Polyhedron wbody = project(r.body, proj);
  c.w = make_reduction(wbody, c.pi.compose(r.write.compose(lift)), r.read.compose(lift), r.op,
                       r.source, false);
  return c;
}

Decomposition decompose_reduction(const Reduction& r, const LinearSubspace& inner_acc,
                                  const std::string& zvar) {
  const std::size_t d = r.d();
  const std::size_t sdim = inner_acc.dim();
  if (sdim == 0 || sdim >= r.a()) throw UnsupportedInput("inner accumulation has the wrong dimension");
  if (!r.acc_space.contains(inner_acc))
    throw UnsupportedInput("inner accumulation leaves the accumulation space");
  auto ann = inner_acc.annihilator();
  auto basis = integer_kernel(RatMatrix::from_rows(ann.basis(), d));
  auto v = complete_with_units(basis, d);
  if (!v) throw UnsupportedInput("no unimodular completion for the inner accumulation");
  const IntMatrix vinv = unimodular_inverse(*v);
  const std::size_t k = d - sdim;
  Decomposition out;
  out.inner_acc = inner_acc;
  out.inner_write = rows_of(vinv, 0, k, d);
  out.inner = make_reduction(r.body, out.inner_write, r.read, r.op, r.source, false);
  Polyhedron obody = project(r.body, out.inner_write);
  out.outer = make_reduction(obody, r.write.compose(cols_of(*v, 0, k)), AffineMap::identity(k),
                             r.op, zvar, false);
  return out;
}

std::vector<LinearSubspace> decomposition_targets(const Reduction& r,
                                                  const std::vector<FacetClass>& facets) {
  std::vector<LinearSubspace> out;
  const std::size_t a = r.a();
  if (a < 2) return out;
  std::vector<const FacetClass*> resid;
  for (const auto& f : facets)
    if (f.residual) resid.push_back(&f);
  const std::size_t maxk = std::min<std::size_t>({a - 1, resid.size(), 3});
  // Subsets in increasing size, lexicographic within a size.
  for (std::size_t k = 1; k <= maxk; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t t = 0; t < k; ++t) idx[t] = t;
    while (true) {
      LinearSubspace s = r.acc_space;
      for (std::size_t t : idx) s = intersect_subspaces(s, kernel_of(resid[t]->normal));
      if (s.dim() >= 1 && s.dim() < a &&
          std::find(out.begin(), out.end(), s) == out.end())
        out.push_back(s);
      std::size_t t = k;
      while (t > 0 && idx[t - 1] == resid.size() - k + t - 1) --t;
      if (t == 0) break;
      ++idx[t - 1];
      for (std::size_t q = t; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return out;
}

LinearSubspace choose_decomposition_targets(const Reduction& r,
                                            const std::vector<FacetClass>& facets) {
  auto all = decomposition_targets(r, facets);
  if (all.empty()) throw UnsupportedInput("no decomposition target");
  return all.front();
}

Equation build_split(const Reduction& r, const std::vector<Reduction>& pieces,
                     const std::string& var, const SubSolver& solve) {
  std::vector<std::pair<Polyhedron, std::vector<std::size_t>>> regions;
  std::vector<ExprPtr> exprs;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Polyhedron pi = project(pieces[i].body, r.write);
    exprs.push_back(solve(pieces[i]));
    std::vector<std::pair<Polyhedron, std::vector<std::size_t>>> next;
    std::vector<Polyhedron> rest{pi};
    for (const auto& [reg, set] : regions) {
      Polyhedron both = reg.intersect(pi);
      if (!both.is_empty()) {
        auto s2 = set;
        s2.push_back(i);
        next.emplace_back(both, s2);
      }
      for (auto& q : set_difference(reg, pi).pieces) next.emplace_back(q, set);
      std::vector<Polyhedron> rest2;
      for (const auto& x : rest)
        for (auto& q : set_difference(x, reg).pieces) rest2.push_back(q);
      rest = std::move(rest2);
    }
    for (auto& x : rest) next.emplace_back(x, std::vector<std::size_t>{i});
    regions = std::move(next);
  }
  Equation eq;
  eq.var = var;
  eq.dim = r.answer_dim();
  eq.op = r.op;
  eq.domain = project(r.body, r.write);
  for (const auto& [reg, set] : regions) {
    std::vector<ExprPtr> args;
    for (std::size_t i : set) args.push_back(exprs[i]);
    eq.branches.push_back({reg, make_combine(r.op, std::move(args))});
  }
  return eq;
}

EquationProgram split_reduction(const Reduction& r, const Constraint& h,
                                const std::string& var) {
  auto [p1, p2] = split_by_hyperplane(r.body, h.with_equality(false));
  std::vector<Reduction> pieces{restrict_to(r, p1), restrict_to(r, p2)};
  return single_equation_program(r, build_split(r, pieces, var, direct_solver));
}

std::string to_string(SplitKind k) {
  switch (k) {
    case SplitKind::SPB: return "SPB";
    case SplitKind::SPI: return "SPI";
    case SplitKind::Triangulation: return "triangulation";
  }
  return "?";
}

std::string SplitCandidate::str() const {
  return to_string(kind) + " " + hyperplane.str(default_names(hyperplane.dim()));
}

std::vector<SplitCandidate> spb_spi_candidates(const Reduction& r) {
  std::vector<SplitCandidate> out;
  const std::size_t d = r.d();
  if (d < 2 || r.body.num_equalities() != 0 || r.body.is_empty()) return out;
  std::vector<std::pair<SplitKind, RatVector>> dirs;
  if (r.a() == 1) dirs.emplace_back(SplitKind::SPB, r.acc_space.basis()[0]);
  if (r.r() == 1) dirs.emplace_back(SplitKind::SPI, r.reuse_space.basis()[0]);
  if (dirs.empty()) return out;
  const FaceLattice lat = build_face_lattice(r.body);
  const auto& cons = r.body.constraints();
  std::set<std::string> seen;
  for (std::size_t f : lat.faces_of_dim(d - 2)) {
    const Face& face = lat.faces[f];
    if (face.vertices.empty()) continue;
    std::vector<RatVector> normals;
    for (std::size_t c : face.saturated) normals.push_back(cons[c].linear());
    LinearSubspace lin = null_space(RatMatrix::from_rows(normals, d));
    for (const auto& [kind, dir] : dirs) {
      if (lin.contains(dir)) continue;
      std::vector<RatVector> rows = lin.basis();
      rows.push_back(dir);
      LinearSubspace nrm = null_space(RatMatrix::from_rows(rows, d));
      if (nrm.dim() != 1) continue;
      IntVector n = canonical_direction(nrm.basis()[0]);
      ParamAffine off = Constraint(n, 0, 0).eval(lat.vertices[face.vertices[0]].coords);
      Constraint h = Constraint::from_rational(to_rational(n), -off.param_coeff, -off.constant);
      try {
        // A supporting hyperplane leaves a flat piece behind.
        auto [lo, hi] = split_by_hyperplane(r.body, h);
        if (lo.affine_dim() != d || hi.affine_dim() != d) continue;
      } catch (const NonSeparating&) {
        continue;
      }
      SplitCandidate c;
      c.hyperplane = h.with_equality(true);
      c.kind = kind;
      c.through_face = face.saturated;
      if (!seen.insert(c.hyperplane.str(default_names(d))).second) continue;
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool is_corner_covered(const ParamVertex& v0, const ParamVertex& v1, const ParamVertex& v2,
                       std::size_t axis) {
  const ParamAffine& x = v0.coords.at(axis);
  ParamAffine lo = v1.coords.at(axis), hi = v2.coords.at(axis);
  if (hi < lo) std::swap(lo, hi);
  return lo <= x && x <= hi;
}

}  // namespace redsimp
