// SPDX-License-Identifier: Apache-2.0
#include "helpers.hpp"

#include <stdexcept>

namespace testing_helpers {

Polyhedron scaled_simplex(const std::vector<std::vector<long>>& verts, long lb) {
  const std::size_t d = verts.size() - 1;
  std::vector<Constraint> cons;
  for (std::size_t skip = 0; skip <= d; ++skip) {
    // Facet through every vertex but `skip`.
    std::vector<RatVector> rows;
    std::size_t base = skip == 0 ? 1 : 0;
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == skip || k == base) continue;
      RatVector r(d);
      for (std::size_t i = 0; i < d; ++i) r[i] = verts[k][i] - verts[base][i];
      rows.push_back(r);
    }
    RatVector normal;
    if (rows.empty()) {
      normal = RatVector{1};
    } else {
      auto ns = null_space(RatMatrix::from_rows(rows, d));
      if (ns.dim() != 1) throw std::invalid_argument("degenerate simplex");
      normal = ns.basis()[0];
    }
    Rational at_base = 0, at_skip = 0;
    for (std::size_t i = 0; i < d; ++i) {
      at_base += normal[i] * verts[base][i];
      at_skip += normal[i] * verts[skip][i];
    }
    if (at_skip < at_base) {
      normal = scaled(normal, -1);
      at_base = -at_base;
    }
    // normal·z - at_base * N >= 0
    cons.push_back(Constraint::from_rational(normal, -at_base, 0));
  }
  return Polyhedron(d, cons, lb);
}

std::vector<std::vector<long>> random_simplex(std::mt19937_64& rng, std::size_t d, long span) {
  std::uniform_int_distribution<long> u(0, span);
  for (;;) {
    std::vector<std::vector<long>> v(d + 1, std::vector<long>(d));
    for (auto& p : v)
      for (auto& x : p) x = u(rng);
    std::vector<RatVector> rows;
    for (std::size_t k = 1; k <= d; ++k) {
      RatVector r(d);
      for (std::size_t i = 0; i < d; ++i) r[i] = v[k][i] - v[0][i];
      rows.push_back(r);
    }
    if (rank(rows, d) == d) return v;
  }
}

AffineMap random_map(std::mt19937_64& rng, std::size_t d, std::size_t m) {
  std::uniform_int_distribution<int> u(-1, 1);
  for (;;) {
    RatMatrix mat(m, d);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < d; ++c) mat.at(r, c) = u(rng);
    if (rank(mat) == m) return AffineMap(mat, RatVector(m), RatVector(m));
  }
}

std::size_t count_kind(const PlanNode& p, PlanKind k) {
  std::size_t n = 0;
  for_each_plan(p, [&](const PlanNode& x) {
    if (x.kind == k && x.detail != "recurse") ++n;
  });
  return n;
}

bool has_split_on(const PlanNode& p, const Constraint& cut) {
  Constraint a = cut, b = cut.opposite();
  a.normalize();
  b.normalize();
  bool found = false;
  for_each_plan(p, [&](const PlanNode& x) {
    if (x.kind != PlanKind::Split || !x.cut) return;
    Constraint c = *x.cut;
    c.equality = a.equality;
    c.normalize();
    if (c.coeffs == a.coeffs && c.param == a.param && c.constant == a.constant) found = true;
    if (c.coeffs == b.coeffs && c.param == b.param && c.constant == b.constant) found = true;
  });
  return found;
}

// Hyperplane through the face missing vertices a and b, and through the
// point a + t (b - a) of the opposite edge, all scaled by N.
Constraint cut_through_face(const std::vector<std::vector<long>>& v, std::size_t a,
                            std::size_t b, const Rational& t) {
  const std::size_t d = v[0].size();
  std::vector<RatVector> pts;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (k != a && k != b) pts.push_back(RatVector(v[k].begin(), v[k].end()));
  RatVector p(d);
  for (std::size_t i = 0; i < d; ++i) p[i] = Rational(v[a][i]) + t * (v[b][i] - v[a][i]);
  pts.push_back(p);
  std::vector<RatVector> rows;
  for (std::size_t k = 1; k < pts.size(); ++k) rows.push_back(sub(pts[k], pts[0]));
  RatVector n = null_space(RatMatrix::from_rows(rows, d)).basis().at(0);
  return Constraint::from_rational(n, -dot(n, pts[0]), 0, true);
}

Reduction random_reduction(std::mt19937_64& rng, std::size_t d, OpKind op) {
  for (;;) {
    auto verts = random_simplex(rng, d, 2);
    Polyhedron body = scaled_simplex(verts);
    std::uniform_int_distribution<std::size_t> m(1, d - 1);
    AffineMap w = random_map(rng, d, m(rng));
    AffineMap rd = random_map(rng, d, std::uniform_int_distribution<std::size_t>(1, d)(rng));
    Operator o;
    o.kind = op;
    try {
      return make_reduction(body, w, rd, o);
    } catch (const UnsupportedInput&) {
    }
  }
}

}  // namespace testing_helpers
