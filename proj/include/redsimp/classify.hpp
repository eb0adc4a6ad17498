// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "redsimp/polyhedra.hpp"
#include "redsimp/reduction.hpp"

namespace redsimp {

enum class Strength { None, Weak, Strong };
std::string to_string(Strength s);

struct FacetClass {
  std::size_t constraint = 0;  // index into the body's constraints
  std::string label;           // "{k}", 1-based
  RatVector normal;            // inward, linear part
  Strength boundary = Strength::None;
  Strength invariant = Strength::None;
  bool residual = false;
};

// Facets of the whole body (each surviving inequality is a facet).
std::vector<FacetClass> classify_facets(const Reduction& r);
// Facets of a face of the body, tested within the face's linear space.
std::vector<FacetClass> classify_facets(const Reduction& r, const FaceLattice& lat,
                                        std::size_t face);
std::size_t residual_count(const Reduction& r);

struct Labeling {
  std::vector<int> signs;  // per facet, in classification order
  IntVector witness;       // primitive reuse vector producing the signs
  bool admissible_without_inverse = false;
  std::string str() const;
};

std::vector<Labeling> enumerate_labelings(const Reduction& r,
                                          const std::vector<FacetClass>& facets,
                                          const LinearSubspace& within);
std::vector<Labeling> enumerate_labelings(const Reduction& r);
std::vector<Labeling> admissible_labelings(const Reduction& r,
                                           const std::vector<Labeling>& ls,
                                           const std::vector<FacetClass>& facets);

}  // namespace redsimp
