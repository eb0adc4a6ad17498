// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "redsimp/affine.hpp"
#include "redsimp/numerics.hpp"

namespace redsimp {

struct NonSeparating : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// coeffs·z + param·N + constant >= 0, or == 0 for equalities.
struct Constraint {
  IntVector coeffs;
  Int param;
  Int constant;
  bool equality = false;

  Constraint() = default;
  Constraint(IntVector c, Int p, Int k, bool eq = false)
      : coeffs(std::move(c)), param(std::move(p)), constant(std::move(k)),
        equality(eq) {}
  // Build from rational coefficients; the result is normalized.
  static Constraint from_rational(const RatVector& c, const Rational& p,
                                  const Rational& k, bool eq = false);

  std::size_t dim() const { return coeffs.size(); }
  RatVector linear() const { return to_rational(coeffs); }
  bool linear_is_zero() const;
  // Divide by the content and round the constant (integer tightening).
  // Returns false when the constraint cannot hold for any integer point.
  bool normalize();
  bool trivially_true() const;

  Int eval(const std::vector<long>& z, long n) const;
  Rational eval(const RatVector& z, const Rational& n) const;
  ParamAffine eval(const std::vector<ParamAffine>& z) const;

  // Integer complement of an inequality: -e - 1 >= 0.
  Constraint complement() const;
  Constraint opposite() const;
  // Constraint satisfied by z exactly when z - shift satisfies this one.
  Constraint translated(const IntVector& shift) const;
  // Constraint on z equivalent to this one applied to map(z).
  Constraint pullback(const AffineMap& map) const;
  Constraint with_equality(bool eq) const;

  bool operator==(const Constraint& o) const {
    return equality == o.equality && param == o.param &&
           constant == o.constant && coeffs == o.coeffs;
  }
  bool operator!=(const Constraint& o) const { return !(*this == o); }
  bool operator<(const Constraint& o) const;

  std::string str(const std::vector<std::string>& names) const;
};

struct ParamVertex {
  std::vector<ParamAffine> coords;
  // Inequality constraints (indices into the polyhedron) tight at the vertex.
  std::set<std::size_t> saturated;

  RatVector at(const Rational& n) const;
  bool operator==(const ParamVertex& o) const { return coords == o.coords; }
};

class Polyhedron {
 public:
  Polyhedron() = default;
  // Normalizes, detects emptiness for all N >= param_lb, promotes implicit
  // equalities and drops redundant constraints. Surviving inequalities keep
  // their input order; equalities come first.
  Polyhedron(std::size_t dim, std::vector<Constraint> cons, long param_lb = 0);
  static Polyhedron universe(std::size_t dim, long param_lb = 0);
  static Polyhedron empty_set(std::size_t dim, long param_lb = 0);

  std::size_t dim() const { return dim_; }
  long param_lower_bound() const { return lb_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  std::size_t num_equalities() const;
  bool is_empty() const { return empty_; }

  Polyhedron intersect(const Polyhedron& o) const;
  Polyhedron with(const Constraint& c) const;
  Polyhedron with(const std::vector<Constraint>& cs) const;
  Polyhedron with_param_lower_bound(long lb) const;
  // {z : z - shift in this}
  Polyhedron translated(const IntVector& shift) const;
  // {z : map(z) in this}
  Polyhedron preimage(const AffineMap& map, std::size_t in_dim) const;

  bool contains(const std::vector<long>& z, long n) const;
  bool contains(const RatVector& z, const Rational& n) const;
  // True when every point of o (for every N >= lb) lies in this.
  bool contains(const Polyhedron& o) const;
  bool same_set(const Polyhedron& o) const {
    return contains(o) && o.contains(*this);
  }

  // Linear space parallel to the affine hull.
  LinearSubspace linear_space() const;
  std::size_t affine_dim() const;
  // Polynomial degree in N of the number of integer points (-1 when empty),
  // read off the limit shape of P(N)/N.
  int asymptotic_degree() const;

  // Canonical text used as a memo key.
  std::string key() const;
  std::string str(const std::vector<std::string>& names) const;
  std::string str() const { return str(default_names(dim_)); }

 private:
  std::size_t dim_ = 0;
  long lb_ = 0;
  std::vector<Constraint> cons_;
  bool empty_ = false;
};

// Disjoint pieces.
struct PolyUnion {
  std::vector<Polyhedron> pieces;
  bool empty() const { return pieces.empty(); }
};

struct Face {
  // Inequality constraints saturated (indices into the polyhedron).
  std::vector<std::size_t> saturated;
  std::size_t dim = 0;
  std::vector<std::size_t> vertices;
  // "{1,3}" using 1-based constraint numbers.
  std::string label() const;
};

struct FaceLattice {
  Polyhedron poly;
  std::vector<ParamVertex> vertices;
  std::vector<Face> faces;  // faces[0] is the polyhedron itself
  std::vector<std::vector<std::size_t>> children;

  std::size_t count_of_dim(std::size_t k) const;
  std::vector<std::size_t> faces_of_dim(std::size_t k) const;
  const std::vector<std::size_t>& facets_of(std::size_t face) const {
    return children[face];
  }
  std::string to_dot(const std::string& name) const;
};

// Thrown as UnsupportedInput when the structure differs between the two
// sample values of N.
std::vector<ParamVertex> enumerate_vertices(const Polyhedron& p);
FaceLattice build_face_lattice(const Polyhedron& p);
// Inward normal of the constraint newly saturated by `facet` relative to
// `parent` (default: the top face).
RatVector facet_normal(const FaceLattice& lat, std::size_t facet,
                       std::size_t parent = 0);
std::size_t facet_constraint(const FaceLattice& lat, std::size_t facet,
                             std::size_t parent = 0);
bool is_simplex(const Polyhedron& p);
bool is_bounded(const Polyhedron& p);

// piece1 = p ∩ {h <= -1}, piece2 = p ∩ {h >= 0}.
std::pair<Polyhedron, Polyhedron> split_by_hyperplane(const Polyhedron& p,
                                                      const Constraint& h);
// Image under an affine map by Fourier-Motzkin elimination.
Polyhedron project(const Polyhedron& p, const AffineMap& map);
// True when the integer image under `map` equals the integer points of the
// rational image (every eliminated bound pair has a unit coefficient).
bool projection_is_exact(const Polyhedron& p, const AffineMap& map);
PolyUnion set_difference(const Polyhedron& a, const Polyhedron& b);
std::vector<Polyhedron> triangulate(const Polyhedron& p);

// Fourier-Motzkin on raw constraint lists over `nvars` variables.
std::vector<Constraint> fm_eliminate(const std::vector<Constraint>& cons,
                                     std::size_t var);
std::vector<Constraint> drop_variable(const std::vector<Constraint>& cons,
                                      std::size_t var);

// Integer points by brute force over a bounding box (test/oracle helper).
std::vector<std::vector<long>> integer_points(const Polyhedron& p, long n);
std::size_t count_points(const Polyhedron& p, long n);

// Concrete sample values used to confirm the large-N structure.
std::pair<long, long> structure_samples(long lb);

}  // namespace redsimp
