// SPDX-License-Identifier: Apache-2.0
#include "redsimp/classify.hpp"

namespace redsimp {

std::string to_string(Strength s) {
  switch (s) {
    case Strength::None: return "none";
    case Strength::Weak: return "weak";
    case Strength::Strong: return "strong";
  }
  return "?";
}

namespace {

Strength strength(const LinearSubspace& space, const LinearSubspace& ker) {
  const std::size_t full = space.dim();
  const std::size_t inside = intersect_subspaces(space, ker).dim();
  if (inside == full) return Strength::Strong;
  if (inside > 0) return Strength::Weak;
  return Strength::None;
}

FacetClass classify_one(const Reduction& r, const LinearSubspace& lin,
                        std::size_t constraint) {
  FacetClass fc;
  fc.constraint = constraint;
  fc.label = "{" + std::to_string(constraint + 1) + "}";
  fc.normal = r.body.constraints()[constraint].linear();
  LinearSubspace acc = intersect_subspaces(r.acc_space, lin);
  LinearSubspace reuse = intersect_subspaces(r.reuse_space, lin);
  LinearSubspace ker = intersect_subspaces(kernel_of(fc.normal), lin);
  fc.boundary = strength(acc, ker);
  fc.invariant = strength(reuse, ker);
  fc.residual = fc.boundary != Strength::Strong && fc.invariant != Strength::Strong;
  return fc;
}

LinearSubspace face_space(const Polyhedron& p, const std::vector<std::size_t>& saturated) {
  std::vector<RatVector> rows;
  for (const auto& c : p.constraints())
    if (c.equality) rows.push_back(c.linear());
  for (auto i : saturated) rows.push_back(p.constraints()[i].linear());
  if (rows.empty()) return LinearSubspace::full(p.dim());
  return null_space(RatMatrix::from_rows(rows, p.dim()));
}

}  // namespace

std::vector<FacetClass> classify_facets(const Reduction& r) {
  LinearSubspace lin = r.body.linear_space();
  std::vector<FacetClass> out;
  const auto& cons = r.body.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i)
    if (!cons[i].equality) out.push_back(classify_one(r, lin, i));
  return out;
}

std::vector<FacetClass> classify_facets(const Reduction& r, const FaceLattice& lat,
                                        std::size_t face) {
  LinearSubspace lin = face_space(lat.poly, lat.faces.at(face).saturated);
  std::vector<FacetClass> out;
  for (auto child : lat.facets_of(face)) {
    FacetClass fc = classify_one(r, lin, facet_constraint(lat, child, face));
    fc.label = lat.faces[child].label();
    out.push_back(fc);
  }
  return out;
}

std::size_t residual_count(const Reduction& r) {
  std::size_t k = 0;
  for (const auto& fc : classify_facets(r)) k += fc.residual;
  return k;
}

std::string Labeling::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i) s += ",";
    s += signs[i] > 0 ? "+" : signs[i] < 0 ? "-" : "0";
  }
  s += ") rho = [";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) s += ",";
    s += witness[i].get_str();
  }
  return s + "]";
}

std::vector<Labeling> enumerate_labelings(const Reduction& r,
                                          const std::vector<FacetClass>& facets,
                                          const LinearSubspace& within) {
  const std::size_t m = facets.size();
  if (within.dim() == 0) throw UnsupportedInput("no reuse within the face");
  if (m > 12) throw UnsupportedInput("more than 12 facets");
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= 3;
  std::vector<Labeling> out;
  std::vector<int> signs(m);
  for (std::size_t code = 0; code < total; ++code) {
    // Lexicographic over (-, 0, +) per facet.
    std::size_t c = code;
    for (std::size_t i = m; i-- > 0;) {
      signs[i] = static_cast<int>(c % 3) - 1;
      c /= 3;
    }
    std::vector<RatVector> zeros, pos, neg;
    for (std::size_t i = 0; i < m; ++i) {
      if (signs[i] == 0) zeros.push_back(facets[i].normal);
      else if (signs[i] > 0) pos.push_back(facets[i].normal);
      else neg.push_back(facets[i].normal);
    }
    std::optional<RatVector> rho;
    if (pos.empty() && neg.empty()) {
      LinearSubspace z = within;
      for (const auto& n : zeros) z = intersect_subspaces(z, kernel_of(n));
      if (z.dim() == 0) continue;
      rho = to_rational(canonical_direction(z.basis()[0]));
    } else {
      rho = feasible_sign_system(zeros, pos, neg, within);
    }
    if (!rho) continue;
    Labeling l;
    l.signs = signs;
    l.witness = primitive_integer(*rho);
    for (std::size_t i = 0; i < m; ++i) {
      int s = sgn(dot(facets[i].normal, to_rational(l.witness)));
      if (s != signs[i]) throw InvariantViolation("labeling witness disagrees with signs");
    }
    l.admissible_without_inverse = true;
    for (std::size_t i = 0; i < m; ++i)
      if (signs[i] < 0 && facets[i].boundary != Strength::Strong)
        l.admissible_without_inverse = false;
    out.push_back(std::move(l));
  }
  (void)r;
  return out;
}

std::vector<Labeling> enumerate_labelings(const Reduction& r) {
  return enumerate_labelings(r, classify_facets(r),
                             intersect_subspaces(r.reuse_space, r.body.linear_space()));
}

std::vector<Labeling> admissible_labelings(const Reduction& r,
                                           const std::vector<Labeling>& ls,
                                           const std::vector<FacetClass>& facets) {
  std::vector<Labeling> out;
  for (const auto& l : ls) {
    if (r.op.has_inverse()) {
      bool any = false;
      for (std::size_t i = 0; i < facets.size(); ++i)
        if (facets[i].residual && l.signs[i] != 0) any = true;
      if (any) out.push_back(l);
    } else if (l.admissible_without_inverse) {
      out.push_back(l);
    }
  }
  return out;
}

}  // namespace redsimp
