// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "redsimp/dsl.hpp"
#include "redsimp/engine.hpp"
#include "redsimp/interp.hpp"
#include "redsimp/polyhedra.hpp"

namespace testing_helpers {

using namespace redsimp;

inline Reduction corpus(const std::string& name) {
  return corpus_spec(name + ".red").reduction();
}

// N * conv(verts) as constraints with the parameter as the scale. The
// vertices must be affinely independent (d+1 of them in dimension d).
Polyhedron scaled_simplex(const std::vector<std::vector<long>>& verts, long lb = 1);

// Random lattice simplex with vertices in [0, span]^d, nondegenerate.
std::vector<std::vector<long>> random_simplex(std::mt19937_64& rng, std::size_t d, long span);

// Random integer map from Z^d to Z^m with small entries and full row rank.
AffineMap random_map(std::mt19937_64& rng, std::size_t d, std::size_t m);

// Hyperplane (an equality) through the face of the scaled simplex missing
// vertices a and b, and through the point a + t (b - a).
Constraint cut_through_face(const std::vector<std::vector<long>>& v, std::size_t a,
                            std::size_t b, const Rational& t);

// Reduction over a random scaled simplex with random small write and read maps.
Reduction random_reduction(std::mt19937_64& rng, std::size_t d, OpKind op);

// Count of plan nodes of a kind whose detail does not mark a recursion.
std::size_t count_kind(const PlanNode& p, PlanKind k);
bool has_split_on(const PlanNode& p, const Constraint& cut);

}  // namespace testing_helpers
