// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace redsimp {

using Int = mpz_class;
using Rational = mpq_class;
using RatVector = std::vector<Rational>;
using IntVector = std::vector<Int>;

// Error classes shared by every module. The CLI maps them to exit codes.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg), line(line), column(column) {}
  int line;
  int column;
};
struct UnsupportedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string to_string(const Rational& q);
std::string to_string(const RatVector& v);

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int floor_of(const Rational& q);
Int ceil_of(const Rational& q);
long to_long(const Int& v);

Rational dot(const RatVector& a, const RatVector& b);
bool is_zero(const RatVector& v);
RatVector scaled(const RatVector& v, const Rational& s);
RatVector add(const RatVector& a, const RatVector& b);
RatVector sub(const RatVector& a, const RatVector& b);
RatVector unit_vector(std::size_t n, std::size_t k);

// Clear denominators and divide by the content; the direction is kept.
IntVector primitive_integer(const RatVector& v);
// Same, then flip so the first nonzero entry is positive.
IntVector canonical_direction(const RatVector& v);
RatVector to_rational(const IntVector& v);

// Value constant + param_coeff * N for the single size parameter N.
struct ParamAffine {
  Rational constant;
  Rational param_coeff;

  ParamAffine() = default;
  ParamAffine(Rational c) : constant(std::move(c)) {}
  ParamAffine(Rational c, Rational p)
      : constant(std::move(c)), param_coeff(std::move(p)) {}

  Rational at(const Rational& n) const { return constant + param_coeff * n; }
  bool is_constant() const { return param_coeff == 0; }

  ParamAffine operator+(const ParamAffine& o) const {
    return {constant + o.constant, param_coeff + o.param_coeff};
  }
  ParamAffine operator-(const ParamAffine& o) const {
    return {constant - o.constant, param_coeff - o.param_coeff};
  }
  ParamAffine operator-() const { return {-constant, -param_coeff}; }
  ParamAffine operator*(const Rational& s) const {
    return {constant * s, param_coeff * s};
  }
  bool operator==(const ParamAffine& o) const {
    return constant == o.constant && param_coeff == o.param_coeff;
  }
  bool operator!=(const ParamAffine& o) const { return !(*this == o); }
  // Ordering for sufficiently large N: slope first, then offset.
  bool operator<(const ParamAffine& o) const {
    if (param_coeff != o.param_coeff) return param_coeff < o.param_coeff;
    return constant < o.constant;
  }
  bool operator<=(const ParamAffine& o) const { return !(o < *this); }
  bool operator>(const ParamAffine& o) const { return o < *this; }
  bool operator>=(const ParamAffine& o) const { return !(*this < o); }
  int sign() const;
};

std::string to_string(const ParamAffine& a);

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RatMatrix from_rows(const std::vector<RatVector>& rows,
                             std::size_t cols);
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  RatVector row(std::size_t r) const;
  RatVector col(std::size_t c) const;
  std::vector<RatVector> row_list() const;
  RatVector apply(const RatVector& v) const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix transpose() const;
  bool operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Subspace of Q^n, stored as a reduced row echelon basis so that equal
// spaces have equal representations.
class LinearSubspace {
 public:
  LinearSubspace() = default;
  explicit LinearSubspace(std::size_t ambient) : ambient_(ambient) {}
  static LinearSubspace span(const std::vector<RatVector>& vectors,
                             std::size_t ambient);
  static LinearSubspace full(std::size_t ambient);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<RatVector>& basis() const { return basis_; }
  bool contains(const RatVector& v) const;
  bool contains(const LinearSubspace& o) const;
  bool operator==(const LinearSubspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator!=(const LinearSubspace& o) const { return !(*this == o); }
  // Vectors orthogonal to the whole subspace.
  LinearSubspace annihilator() const;
  // Integer basis vectors, each primitive (not necessarily a lattice basis).
  std::vector<IntVector> integer_basis() const;

 private:
  std::size_t ambient_ = 0;
  std::vector<RatVector> basis_;
};

std::size_t rank(const RatMatrix& m);
std::size_t rank(const std::vector<RatVector>& rows, std::size_t cols);
LinearSubspace null_space(const RatMatrix& m);
LinearSubspace intersect_subspaces(const LinearSubspace& u,
                                   const LinearSubspace& v);
// Kernel of a single row vector within the ambient space.
LinearSubspace kernel_of(const RatVector& row);

// Solve m x = b exactly; nullopt when inconsistent.
std::optional<RatVector> solve_linear(const RatMatrix& m, const RatVector& b);

// Find rho in `within` with the requested dot-product signs. The answer is
// scaled to a primitive integer vector.
std::optional<RatVector> feasible_sign_system(
    const std::vector<RatVector>& zeros, const std::vector<RatVector>& positives,
    const std::vector<RatVector>& negatives, const LinearSubspace& within);

std::ostream& operator<<(std::ostream& os, const ParamAffine& a);

}  // namespace redsimp
