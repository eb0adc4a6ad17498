// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "redsimp/numerics.hpp"

namespace redsimp {

// Dense integer matrix stored by rows.
using IntMatrix = std::vector<IntVector>;

IntMatrix int_identity(std::size_t n);
IntMatrix int_transpose(const IntMatrix& m, std::size_t cols);
IntMatrix int_product(const IntMatrix& a, const IntMatrix& b, std::size_t inner,
                      std::size_t cols);
RatMatrix to_rational(const IntMatrix& m, std::size_t cols);
// Inverse of a unimodular matrix; throws if the matrix is not unimodular.
IntMatrix unimodular_inverse(const IntMatrix& m);
Int int_determinant(const IntMatrix& m);

// Column reduction M V = [H | 0] with V unimodular. The trailing
// cols - rank columns of V form a lattice basis of the integer kernel.
struct ColumnReduction {
  IntMatrix h;
  IntMatrix v;
  std::size_t rank = 0;
};
ColumnReduction column_reduce(const IntMatrix& m, std::size_t cols);

// Lattice basis (as columns listed one per entry) of {x in Z^n : m x = 0}.
std::vector<IntVector> integer_kernel(const IntMatrix& m, std::size_t cols);
std::vector<IntVector> integer_kernel(const RatMatrix& m);

// Unimodular n x n matrix whose first columns are `columns`, when the
// columns generate a saturated sublattice.
std::optional<IntMatrix> unimodular_completion(
    const std::vector<IntVector>& columns, std::size_t n);

// Unimodular matrix [units | columns]: unit vectors completing the given
// columns go first when that is unimodular, else a general completion.
std::optional<IntMatrix> complete_with_units(const std::vector<IntVector>& columns,
                                             std::size_t n);

}  // namespace redsimp
