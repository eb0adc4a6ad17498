// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "redsimp/classify.hpp"
#include "redsimp/program.hpp"

namespace redsimp {

// Returns an expression evaluating `sub` at the answer p of the enclosing
// equation (same answer space). May register extra equations on the side.
using SubSolver = std::function<ExprPtr(const Reduction& sub)>;
// Plain Reduce nodes, no further simplification.
ExprPtr direct_solver(const Reduction& sub);

// a \ (a + shift) as facet strips, each strip sliced into hyperplanes
// c(z) = t. Pieces follow the stored constraint order.
std::vector<Polyhedron> facet_strips(const Polyhedron& a, const IntVector& shift);

struct SingleStep {
  IntVector rho;
  IntVector delta;                 // write(rho)
  Polyhedron answers;              // projected body
  std::vector<Polyhedron> init_guards;
  std::vector<Reduction> init;     // body over each init guard
  Polyhedron rec_guard;
  std::vector<Reduction> entry;    // D \ (D + rho), inside the recurrence
  std::vector<Reduction> exit;     // (D + rho) \ D, inside the recurrence
  bool pure_copy() const { return entry.empty() && exit.empty(); }
};

SingleStep single_step_parts(const Reduction& r, const IntVector& rho);
Equation build_single_step(const Reduction& r, const SingleStep& s, const std::string& var,
                           const SubSolver& solve);
EquationProgram single_step_simplify(const Reduction& r, const Labeling& l,
                                     const std::string& var = "Y");

// Pure-copy recurrence: Y[p] = W[pi(p)] with W one dimension smaller.
struct Collapse {
  Reduction w;
  AffineMap pi;  // answer space of r -> answer space of w
};
std::optional<Collapse> collapse_copy(const Reduction& r, const SingleStep& s);

struct Decomposition {
  Reduction inner;     // writes the intermediate variable
  Reduction outer;     // reduces the intermediate variable
  AffineMap inner_write;
  LinearSubspace inner_acc;
};
Decomposition decompose_reduction(const Reduction& r, const LinearSubspace& inner_acc,
                                  const std::string& zvar);
// Candidate inner accumulation spaces: A intersected with the kernels of up
// to a-1 residual facets; deduplicated, deterministic order.
std::vector<LinearSubspace> decomposition_targets(const Reduction& r,
                                                  const std::vector<FacetClass>& facets);
LinearSubspace choose_decomposition_targets(const Reduction& r,
                                            const std::vector<FacetClass>& facets);

// Branch structure over overlapping projections of disjoint pieces.
Equation build_split(const Reduction& r, const std::vector<Reduction>& pieces,
                     const std::string& var, const SubSolver& solve);
EquationProgram split_reduction(const Reduction& r, const Constraint& h,
                                const std::string& var = "Y");

enum class SplitKind { SPB, SPI, Triangulation };
struct SplitCandidate {
  Constraint hyperplane;  // as an equality
  SplitKind kind = SplitKind::SPB;
  std::vector<std::size_t> through_face;  // saturated constraints of the (d-2)-face
  std::string str() const;
};
std::string to_string(SplitKind k);
std::vector<SplitCandidate> spb_spi_candidates(const Reduction& r);

// Projection of v0 on the axis lies weakly between those of v1 and v2.
bool is_corner_covered(const ParamVertex& v0, const ParamVertex& v1, const ParamVertex& v2,
                       std::size_t axis);

// Geometry of the fractal scheme for a canonical triangle (corner at the
// origin, two residual edges meeting there, third edge a strong boundary or
// invariant, corner uncovered). The level program is left empty.
struct FractalGeometry {
  std::shared_ptr<FractalNode> node;
  Reduction outside;              // triangle minus the sub-triangle
  std::vector<Reduction> pieces;  // outside split by the second cut
};
std::optional<FractalGeometry> fractal_geometry(const Reduction& tri, long threshold,
                                                const std::string& name);

}  // namespace redsimp
