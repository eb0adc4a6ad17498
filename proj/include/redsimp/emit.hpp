// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "redsimp/program.hpp"

namespace redsimp {

struct EmitOptions {
  std::string function = "compute";
  // Printed as a leading comment when nonempty.
  std::string plan;
};

// C text for the program: one loop nest per branch in dependence order,
// scans walking along their recurrence, families as loops over the
// context and each fractal node as a recursive function fractal_<k>.
// Inputs are read through `value_t <name>_at(long, ...)`, to be supplied.
std::string emit_c(const EquationProgram& p, const EmitOptions& o = {});

}  // namespace redsimp
