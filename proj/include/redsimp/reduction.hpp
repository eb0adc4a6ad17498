// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redsimp/affine.hpp"
#include "redsimp/intlinalg.hpp"
#include "redsimp/polyhedra.hpp"

namespace redsimp {

// Runtime value. `empty` stands for the operator identity (the fold over no
// points): -inf for max, +inf for min, 0 for sum and 1 for product.
struct Value {
  bool empty = true;
  Rational q;

  static Value none() { return Value{}; }
  static Value of(Rational v) {
    Value x;
    x.empty = false;
    x.q = std::move(v);
    return x;
  }
  bool operator==(const Value& o) const {
    return empty == o.empty && (empty || q == o.q);
  }
  bool operator!=(const Value& o) const { return !(*this == o); }
};

enum class OpKind { Sum, Product, Max, Min };

struct Operator {
  OpKind kind = OpKind::Sum;
  // Product only: allow division (inputs known to be nonzero).
  bool product_invertible = false;

  static std::optional<Operator> parse(const std::string& name);
  std::string name() const;
  bool has_inverse() const;
  bool idempotent() const { return kind == OpKind::Max || kind == OpKind::Min; }
  std::string identity_string() const;
  // Empty, or numerically equal to the identity (0 for sum, 1 for product).
  bool is_identity(const Value& v) const;
  std::string c_symbol() const;

  // Caller counts operations; these never touch the counter.
  Value apply(const Value& a, const Value& b) const;
  // a with the contribution b removed.
  Value inverse(const Value& a, const Value& b) const;
  bool operator==(const Operator& o) const {
    return kind == o.kind && product_invertible == o.product_invertible;
  }
};

std::string to_string(const Value& v, const Operator& op);

struct Reduction {
  Polyhedron body;
  AffineMap write;
  AffineMap read;
  Operator op;
  std::string source = "X";
  LinearSubspace acc_space;
  LinearSubspace reuse_space;

  std::size_t d() const { return body.dim(); }
  std::size_t a() const { return acc_space.dim(); }
  std::size_t r() const { return reuse_space.dim(); }
  std::size_t answer_dim() const { return write.out_dim(); }
  long param_lb() const { return body.param_lower_bound(); }

  // Canonical text identifying the reduction up to variable naming.
  std::string key() const;
  std::string str(const std::vector<std::string>& names) const;
  std::string str() const { return str(default_names(d())); }
};

// Derives the spaces. With `require_accumulation` the write map must be
// rank deficient and the body nonempty.
Reduction make_reduction(Polyhedron body, AffineMap write, AffineMap read,
                         Operator op, std::string source = "X",
                         bool require_accumulation = true);

// z = basis * y + offset_param * N + offset_const.
struct Reindexing {
  IntMatrix basis;  // d rows, k columns
  IntVector offset_param;
  IntVector offset_const;

  std::size_t from_dim() const { return basis.empty() ? 0 : basis[0].size(); }
  std::size_t to_dim() const { return basis.size(); }
  AffineMap as_map() const;
  bool is_identity() const;
};

Reindexing identity_reindexing(std::size_t d);
// The reduction expressed in the y coordinates of `t`.
Reduction reindex(const Reduction& r, const Reindexing& t);

// Integer parametrization of the affine hull of the body. Returns nothing
// when the body is already full dimensional.
std::optional<std::pair<Reduction, Reindexing>> reparametrize(const Reduction& r);

// Unimodular change of basis z = U y with y = (free dims, reuse, accumulation).
std::pair<Reduction, Reindexing> canonicalize_axes(const Reduction& r);

// A reduction seen as a family of independent member reductions indexed by
// a context c. Member coordinates are (u, v): u spans reuse, v accumulation.
struct IndependentFamily {
  std::size_t context_dim = 0;
  std::vector<std::size_t> free_dims;  // context coordinates, canonical basis
  Reduction member;                    // param is s, source "X" indexed by v
  Polyhedron context;                  // over c
  AffineMap answer_to_member;          // p -> (c, u)
  AffineMap s_of_context;              // c -> s
  AffineMap input_embed;               // (c, v) -> source index
  AffineMap embedding;                 // (c, u, v) -> z
  std::string source;
  bool trivial = false;                // identity wrapper

  std::string describe() const;
};

// All ways (possibly none) of viewing r as a family; the first entries use
// no translation. Requires A ∩ R = {0}.
std::vector<IndependentFamily> factor_independent(const Reduction& r);

}  // namespace redsimp
