// SPDX-License-Identifier: Apache-2.0
#include "redsimp/affine.hpp"

namespace redsimp {

AffineMap::AffineMap(RatMatrix m, RatVector p, RatVector c)
    : matrix(std::move(m)), param_col(std::move(p)), const_col(std::move(c)) {
  if (param_col.size() != matrix.rows() || const_col.size() != matrix.rows())
    throw DimensionMismatch("affine map: column length");
}

AffineMap AffineMap::linear(RatMatrix m) {
  RatVector z(m.rows());
  return AffineMap(std::move(m), z, z);
}

AffineMap AffineMap::identity(std::size_t n) {
  return linear(RatMatrix::identity(n));
}

AffineMap AffineMap::select(std::size_t in_dim,
                            const std::vector<std::size_t>& keep) {
  RatMatrix m(keep.size(), in_dim);
  for (std::size_t r = 0; r < keep.size(); ++r) m.at(r, keep[r]) = 1;
  return linear(std::move(m));
}

RatVector AffineMap::apply(const RatVector& z, const Rational& n) const {
  RatVector out = matrix.apply(z);
  for (std::size_t r = 0; r < out.size(); ++r)
    out[r] += param_col[r] * n + const_col[r];
  return out;
}

std::vector<ParamAffine> AffineMap::apply(const std::vector<ParamAffine>& z) const {
  if (z.size() != in_dim()) throw DimensionMismatch("affine map: input length");
  std::vector<ParamAffine> out(out_dim());
  for (std::size_t r = 0; r < out_dim(); ++r) {
    ParamAffine acc(const_col[r], param_col[r]);
    for (std::size_t c = 0; c < in_dim(); ++c)
      if (sgn(matrix.at(r, c)) != 0) acc = acc + z[c] * matrix.at(r, c);
    out[r] = acc;
  }
  return out;
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
  if (in_dim() != inner.out_dim())
    throw DimensionMismatch("affine map: composition arity");
  RatMatrix m = matrix * inner.matrix;
  RatVector p = matrix.apply(inner.param_col);
  RatVector c = matrix.apply(inner.const_col);
  for (std::size_t r = 0; r < out_dim(); ++r) {
    p[r] += param_col[r];
    c[r] += const_col[r];
  }
  return AffineMap(std::move(m), std::move(p), std::move(c));
}

bool AffineMap::is_integral() const {
  for (std::size_t r = 0; r < out_dim(); ++r) {
    if (param_col[r].get_den() != 1 || const_col[r].get_den() != 1) return false;
    for (std::size_t c = 0; c < in_dim(); ++c)
      if (matrix.at(r, c).get_den() != 1) return false;
  }
  return true;
}

bool AffineMap::has_param() const { return !is_zero(param_col); }

std::vector<std::string> default_names(std::size_t dim) {
  static const char* base[] = {"i", "j", "k", "l", "m", "n", "o", "q"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dim; ++i)
    out.push_back(i < 8 ? std::string(base[i]) : "z" + std::to_string(i));
  return out;
}

namespace {

void append_term(std::string& s, const Rational& q, const std::string& name) {
  if (sgn(q) == 0) return;
  Rational a = abs(q);
  if (s.empty()) {
    if (sgn(q) < 0) s += "-";
  } else {
    s += sgn(q) < 0 ? " - " : " + ";
  }
  if (name.empty()) {
    s += a.get_str();
    return;
  }
  if (a != 1) {
    s += a.get_str();
    if (a.get_den() != 1) s += "*";
  }
  s += name;
}

}  // namespace

std::string affine_string(const RatVector& coeffs, const Rational& param,
                          const Rational& constant,
                          const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < coeffs.size(); ++i) append_term(s, coeffs[i], names.at(i));
  append_term(s, param, "N");
  append_term(s, constant, "");
  return s.empty() ? "0" : s;
}

std::vector<std::string> AffineMap::row_strings(
    const std::vector<std::string>& names) const {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < out_dim(); ++r)
    out.push_back(affine_string(matrix.row(r), param_col[r], const_col[r], names));
  return out;
}

std::string AffineMap::str(const std::vector<std::string>& names) const {
  std::string s = "[";
  for (std::size_t i = 0; i < in_dim(); ++i) {
    if (i) s += ",";
    s += names.at(i);
  }
  s += "] -> [";
  auto rows = row_strings(names);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) s += ",";
    s += rows[i];
  }
  return s + "]";
}

}  // namespace redsimp
