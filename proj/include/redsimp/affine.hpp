// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "redsimp/numerics.hpp"

namespace redsimp {

// z -> matrix z + param_col N + const_col
struct AffineMap {
  RatMatrix matrix;
  RatVector param_col;
  RatVector const_col;

  AffineMap() = default;
  AffineMap(RatMatrix m, RatVector p, RatVector c);
  static AffineMap linear(RatMatrix m);
  static AffineMap identity(std::size_t n);
  // Keep the listed coordinates, in order.
  static AffineMap select(std::size_t in_dim, const std::vector<std::size_t>& keep);

  std::size_t in_dim() const { return matrix.cols(); }
  std::size_t out_dim() const { return matrix.rows(); }

  RatVector apply(const RatVector& z, const Rational& n) const;
  std::vector<ParamAffine> apply(const std::vector<ParamAffine>& z) const;
  // Linear part only.
  RatVector apply_linear(const RatVector& v) const { return matrix.apply(v); }
  // this ∘ inner
  AffineMap compose(const AffineMap& inner) const;
  bool is_integral() const;
  bool has_param() const;

  bool operator==(const AffineMap& o) const {
    return matrix == o.matrix && param_col == o.param_col &&
           const_col == o.const_col;
  }
  bool operator!=(const AffineMap& o) const { return !(*this == o); }

  // "[i,j] -> [i+1,j]" style rendering.
  std::string str(const std::vector<std::string>& names) const;
  std::vector<std::string> row_strings(const std::vector<std::string>& names) const;
};

std::vector<std::string> default_names(std::size_t dim);
std::string affine_string(const RatVector& coeffs, const Rational& param,
                          const Rational& constant,
                          const std::vector<std::string>& names);

}  // namespace redsimp
