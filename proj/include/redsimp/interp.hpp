// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "redsimp/program.hpp"

namespace redsimp {

using Index = std::vector<long>;
using InputFn = std::function<Value(const std::string&, const Index&)>;
using Answers = std::map<Index, Value>;

struct OpCounter {
  std::uint64_t ops = 0;
  std::uint64_t inverses = 0;
  std::uint64_t total() const { return ops + inverses; }
};

// Demand-driven evaluation of one program at one value of its parameter.
class Evaluator {
 public:
  Evaluator(const EquationProgram& p, long n, InputFn inputs, OpCounter* counter);
  ~Evaluator();

  Value get(const std::string& var, const Index& idx);
  Value eval(const Expr& e, const Index& p);
  // Program variable or input.
  Value read(const std::string& var, const Index& idx);
  long n() const { return n_; }

 private:
  Value combine(const Operator& op, const Value& a, const Value& b);
  Value reduce_direct(const Expr& e, const Index& p, long n);
  Value eval_fractal(const Expr& e, const Index& p);
  Value eval_family(const Expr& e, const Index& p);

  const EquationProgram& prog_;
  long n_;
  InputFn inputs_;
  OpCounter* counter_;
  std::map<std::string, std::map<Index, Value>> memo_;
  std::set<std::pair<std::string, Index>> active_;
  std::map<std::pair<const void*, Index>, std::unique_ptr<Evaluator>> children_;
};

// Applies an affine map to an integer point; false when the image is not integral.
bool apply_integral(const AffineMap& m, const Index& z, long n, Index& out);

// Deterministic pseudorandom inputs (LCG hash of seed, name and index).
InputFn lcg_inputs(std::uint64_t seed, const Operator& op, long range = 1000);

Answers oracle_evaluate(const Reduction& r, long n, const InputFn& inputs,
                        OpCounter* counter = nullptr);
Answers interpret(const EquationProgram& p, long n, const InputFn& inputs,
                  const std::vector<Index>& at, OpCounter* counter = nullptr);
// Answer indices (over-approximation by the projected domain).
std::vector<Index> answer_candidates(const Reduction& r, long n);
// One equation with the reduction as its only branch.
EquationProgram raw_program(const Reduction& r, const std::string& var = "Y");

struct DegreeFit {
  double slope = 0;
  double residual = 0;
  std::vector<std::pair<long, std::uint64_t>> counts;
};
DegreeFit fit_degree(const std::vector<std::pair<long, std::uint64_t>>& counts);
DegreeFit estimate_degree(const EquationProgram& p, const Reduction& r,
                          const std::vector<long>& ns, std::uint64_t seed = 1);

// Runs f on a thread with a large stack (deep recurrences).
void run_with_big_stack(const std::function<void()>& f);

}  // namespace redsimp
