// SPDX-License-Identifier: Apache-2.0
// Brute-force reference used by the tests. It shares no code with the
// library beyond the parsed input types: points come from a bounding box scan, the
// fold uses plain GMP arithmetic.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redsimp/dsl.hpp"
#include "redsimp/interp.hpp"

namespace oracle {

// c·z + n*N + k
struct Affine {
  std::vector<long> c;
  long n = 0;
  long k = 0;
  long eval(const std::vector<long>& z, long N) const;
};

struct Problem {
  std::size_t d = 0;
  std::vector<Affine> ge;  // >= 0
  std::vector<Affine> eq;  // == 0
  std::vector<Affine> write, read;
  std::string op;  // sum, product, max, min
  // Coordinates scanned in [-box*(N+1), box*(N+1)].
  long box = 2;
};

Problem from_spec(const redsimp::ReductionSpec& s);
Problem from_reduction(const redsimp::Reduction& r);

using Inputs = std::function<mpq_class(const std::vector<long>&)>;
using Result = std::map<std::vector<long>, mpq_class>;

// Test inputs: a hash of seed and index, in [-500, 499] (product: ±1..3).
Inputs hashed_inputs(std::uint64_t seed, const std::string& op);
redsimp::InputFn as_input_fn(const Inputs& in);

Result evaluate(const Problem& p, long N, const Inputs& in);
std::size_t count_points(const Problem& p, long N);

// Elementwise equality; `got` may hold identity entries for indices the
// oracle does not produce (numerically, for sum and product given `op`).
bool same(const Result& want, const redsimp::Answers& got, std::string* why = nullptr,
          const std::string& op = "");

// Oracle vs interpret for one program at one N.
bool check_program(const redsimp::Reduction& r, const redsimp::EquationProgram& p, long N,
                   std::uint64_t seed, redsimp::OpCounter* counter = nullptr,
                   std::string* why = nullptr);

}  // namespace oracle
