// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "redsimp/transforms.hpp"

namespace redsimp {

namespace {

bool is_origin(const ParamVertex& v) {
  return std::all_of(v.coords.begin(), v.coords.end(),
                     [](const ParamAffine& x) { return x == ParamAffine(0); });
}

}  // namespace

std::optional<FractalGeometry> fractal_geometry(const Reduction& tri, long threshold,
                                                const std::string& name) {
  if (tri.d() != 2 || tri.a() != 1 || tri.r() != 1) return std::nullopt;
  if (tri.body.num_equalities() != 0 || tri.body.constraints().size() != 3) return std::nullopt;
  // Canonical axes: u (index 0) spans reuse, v (index 1) accumulation.
  if (!tri.reuse_space.contains(unit_vector(2, 0)) || !tri.acc_space.contains(unit_vector(2, 1)))
    return std::nullopt;
  std::vector<ParamVertex> verts;
  try {
    verts = enumerate_vertices(tri.body);
  } catch (const UnsupportedInput&) {
    return std::nullopt;
  }
  if (verts.size() != 3) return std::nullopt;
  auto facets = classify_facets(tri);
  std::vector<std::size_t> resid;
  const FacetClass* third = nullptr;
  for (const auto& f : facets) {
    if (f.residual)
      resid.push_back(f.constraint);
    else
      third = &f;
  }
  if (resid.size() != 2 || !third) return std::nullopt;
  const bool vertical = third->boundary == Strength::Strong;
  if (!vertical && third->invariant != Strength::Strong) return std::nullopt;

  std::size_t corner = verts.size();
  for (std::size_t k = 0; k < verts.size(); ++k)
    if (verts[k].saturated.count(resid[0]) && verts[k].saturated.count(resid[1])) corner = k;
  if (corner == verts.size() || !is_origin(verts[corner])) return std::nullopt;
  const ParamVertex& v0 = verts[corner];
  ParamVertex va = verts[(corner + 1) % 3], vb = verts[(corner + 2) % 3];

  const Constraint& tc = tri.body.constraints()[third->constraint];
  const IntVector nu{-tc.coeffs[0], -tc.coeffs[1]};
  const Int lambda = tc.param, mu = tc.constant;
  if (lambda <= 0) return std::nullopt;

  // y runs along the third edge, w across it.
  const std::size_t y = vertical ? 1 : 0;
  if (is_corner_covered(v0, va, vb, y)) return std::nullopt;
  Rational ya = va.coords[y].param_coeff, yb = vb.coords[y].param_coeff;
  if (ya == 0 || yb == 0 || abs(ya) == abs(yb)) return std::nullopt;
  if (abs(ya) > abs(yb)) {
    std::swap(va, vb);
    std::swap(ya, yb);
  }
  const Rational t = ya / yb;
  if (t <= 0 || t >= 1) return std::nullopt;
  const Int tp = t.get_num(), tq = t.get_den();

  const long lb = std::max(threshold, tri.param_lb());
  FractalGeometry g;
  auto node = std::make_shared<FractalNode>();
  node->name = name;
  node->triangle = tri;
  node->third_normal = nu;
  node->lambda = lambda;
  node->mu = mu;
  node->scale = t;
  node->threshold = threshold;
  node->corner = v0;
  node->v1 = va;
  node->v2 = vb;
  node->alpha_cut = Constraint({tq * nu[0], tq * nu[1]}, -tp * lambda, -tp * mu);
  node->alpha_cut.normalize();
  // Side of the second cut holding the far vertex.
  const ParamAffine& y1 = va.coords[y];
  RatVector e = unit_vector(2, y);
  if (yb < 0) e = scaled(e, -1);
  const Rational sign = yb < 0 ? -1 : 1;
  node->beta_cut = Constraint::from_rational(e, -sign * y1.param_coeff, -sign * y1.constant);
  node->answers = project(tri.body, tri.write);

  Polyhedron outside = tri.body.with(node->alpha_cut).with_param_lower_bound(lb);
  Polyhedron pa = outside.with(node->beta_cut.complement());
  Polyhedron pb = outside.with(node->beta_cut);
  if (outside.is_empty() || pa.is_empty() || pb.is_empty()) return std::nullopt;
  auto piece = [&](const Polyhedron& p) {
    return make_reduction(p, tri.write, tri.read, tri.op, tri.source, false);
  };
  node->whole = make_reduce(tri);
  node->sub = make_reduce(piece(tri.body.with(node->alpha_cut.complement())));
  g.outside = piece(outside);
  g.pieces = {piece(pa), piece(pb)};
  g.node = std::move(node);
  return g;
}

}  // namespace redsimp
