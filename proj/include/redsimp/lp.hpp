// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "redsimp/numerics.hpp"

namespace redsimp {

// a·x + b >= 0, or == 0 when `equality` is set.
struct LinRow {
  RatVector a;
  Rational b;
  bool equality = false;
};

enum class LpStatus { Infeasible, Optimal, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVector x;
  Rational value;
};

// Exact two-phase simplex over free variables with Bland's pivoting rule.
LpResult lp_maximize(std::size_t nvars, const std::vector<LinRow>& rows,
                     const RatVector& objective);
bool lp_feasible(std::size_t nvars, const std::vector<LinRow>& rows);

}  // namespace redsimp
