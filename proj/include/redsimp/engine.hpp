// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "redsimp/program.hpp"
#include "redsimp/transforms.hpp"

namespace redsimp {

enum class PlanKind { Leaf, Scan, Simplify, Decompose, Split, Fractal, Family };
std::string to_string(PlanKind k);
std::optional<PlanKind> parse_plan_kind(const std::string& s);

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

struct PlanNode {
  PlanKind kind = PlanKind::Leaf;
  std::string detail;
  int degree = 0;
  std::optional<Constraint> cut;  // Split only
  std::optional<IntVector> rho;   // Scan / Simplify only
  std::vector<PlanPtr> children;
};

std::string plan_string(const PlanNode& p);
// Line-oriented text, first line "redsimp-plan v1".
std::string serialize_plan(const PlanNode& p);
PlanPtr parse_plan(const std::string& text);
std::size_t plan_count(const PlanNode& p, PlanKind k);
void for_each_plan(const PlanNode& p, const std::function<void(const PlanNode&)>& f);

struct Cost {
  int degree = 0;
  std::size_t pieces = 0;
  std::size_t faces = 0;
  bool operator<(const Cost& o) const {
    if (degree != o.degree) return degree < o.degree;
    if (pieces != o.pieces) return pieces < o.pieces;
    return faces < o.faces;
  }
  std::string str() const;
};

// Degree in N of the work of a program (guards, folds, families, fractals).
int cost_of(const EquationProgram& p);

struct EngineOptions {
  long fractal_threshold = 4;
  std::size_t max_depth = 64;
  // Candidates tried per split search.
  std::size_t split_budget = 6;
};

// Result for one reduction. Variables owned by the solution start with '@';
// `expr` evaluates the reduction at an answer.
struct Solution {
  PlanPtr plan;
  std::vector<Equation> equations;
  ExprPtr expr;
  Cost cost;
};

class Engine {
 public:
  explicit Engine(EngineOptions o = {}) : opt_(o) {}

  Solution solve(const Reduction& r) { return solve(r, 0); }
  // Complete program computing r into `var`.
  EquationProgram program(const Reduction& r, const Solution& s, const std::string& var) const;

  std::size_t explored() const { return explored_; }
  std::optional<Solution> try_fractal(const Reduction& r) { return fractal_candidate(r, 0); }

 private:
  Solution solve(const Reduction& r, std::size_t depth);
  Solution search(const Reduction& r, std::size_t depth);
  Solution leaf(const Reduction& r) const;
  std::vector<Solution> simplify_candidates(const Reduction& r, const std::vector<FacetClass>& f,
                                            std::size_t depth);
  std::vector<Solution> decomposition_candidates(const Reduction& r,
                                                 const std::vector<FacetClass>& f,
                                                 std::size_t depth);
  std::vector<Solution> family_candidates(const Reduction& r, std::size_t depth);
  std::vector<Solution> split_candidates(const Reduction& r, std::size_t depth);
  std::optional<Solution> fractal_candidate(const Reduction& r, std::size_t depth);
  std::optional<Solution> collapse_candidate(const Reduction& r, const SingleStep& s,
                                             std::size_t depth);
  std::optional<std::pair<Reduction, Collapse>> inner_collapse(const Reduction& inner);
  Solution finish(const Reduction& r, PlanKind kind, std::string detail,
                  std::vector<Equation> eqs, ExprPtr expr, std::vector<PlanPtr> children,
                  std::size_t faces) const;

  EngineOptions opt_;
  std::map<std::string, Solution> memo_;
  std::size_t explored_ = 0;
};

struct SimplifyResult {
  EquationProgram program;
  PlanPtr plan;
  Cost cost;
};

SimplifyResult simplify_max(const Reduction& r, const EngineOptions& o = {},
                            const std::string& var = "Y");
// Fractal scheme for a 2D triangle with an uncovered corner; throws
// UnsupportedInput when the scheme does not apply.
SimplifyResult fractal_simplify(const Reduction& r, long threshold = 4,
                                const std::string& var = "Y");

// Throws InvariantViolation unless every piece has fewer residual facets.
void assert_termination(const Reduction& parent, const std::vector<Reduction>& pieces);

}  // namespace redsimp
