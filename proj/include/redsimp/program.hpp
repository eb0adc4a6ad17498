// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "redsimp/reduction.hpp"

namespace redsimp {

class FiberScanner;
struct Expr;
struct FractalNode;
struct FamilyNode;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  Reduce,          // fold over the fiber of the answer in `reduction`
  Input,           // a reduction with a = 0: a single (possibly absent) point
  Ref,             // var[index(p)]
  Combine,         // op over args
  InverseCombine,  // args[0] with args[1..] removed
  Fractal,
  Family,
};

struct Expr {
  ExprKind kind = ExprKind::Ref;
  Operator op;
  std::shared_ptr<const Reduction> reduction;
  std::string var;
  AffineMap index;
  std::vector<ExprPtr> args;
  std::shared_ptr<const FractalNode> fractal;
  std::shared_ptr<const FamilyNode> family;

  const FiberScanner& scanner() const;

 private:
  mutable std::once_flag scanner_once_;
  mutable std::shared_ptr<const FiberScanner> scanner_;
};

ExprPtr make_reduce(Reduction r);
ExprPtr make_ref(std::string var, AffineMap index);
ExprPtr make_combine(const Operator& op, std::vector<ExprPtr> args);
ExprPtr make_inverse(const Operator& op, ExprPtr base, std::vector<ExprPtr> removed);
ExprPtr make_fractal(std::shared_ptr<const FractalNode> f, std::size_t answer_dim);
ExprPtr make_family(std::shared_ptr<const FamilyNode> f, std::size_t answer_dim);

struct Branch {
  Polyhedron guard;
  ExprPtr expr;
};

struct Equation {
  std::string var;
  std::size_t dim = 0;
  Operator op;
  Polyhedron domain;
  std::vector<Branch> branches;
};

struct EquationProgram {
  std::vector<Equation> equations;
  std::string output;
  std::map<std::string, std::size_t> inputs;
  long param_lb = 0;
  std::string param_name = "N";

  const Equation* find(const std::string& var) const;
  std::string str() const;
};

struct FractalNode {
  std::string name;
  Reduction triangle;        // canonical: corner at the origin, param s
  IntVector third_normal;    // third edge: third_normal·z <= lambda*s + mu
  Int lambda;
  Int mu;
  Rational scale;            // homothety ratio of the recursive sub-triangle
  long threshold = 4;
  ParamVertex corner, v1, v2;
  Constraint alpha_cut;      // complement side of the sub-triangle
  Constraint beta_cut;
  EquationProgram level;     // the part outside the sub-triangle
  Polyhedron answers;        // over-approximate answer set of the triangle
  ExprPtr whole;             // direct fold over the triangle (base case)
  ExprPtr sub;               // direct fold over the sub-triangle (fallback)
  std::string describe() const;
};

struct FamilyNode {
  std::string name;
  IndependentFamily family;
  EquationProgram member;
  std::string describe() const;
};

struct Diagnostic {
  std::string severity;  // "error" or "note"
  std::string message;
};

std::vector<Diagnostic> evaluate_branch_wellformedness(const EquationProgram& p);

// Renames every variable whose name starts with `from_prefix`.
EquationProgram rename_variables(const EquationProgram& p, const std::string& from,
                                 const std::string& to);
ExprPtr rename_expr(const ExprPtr& e, const std::string& from, const std::string& to);

std::string expr_string(const Expr& e, const std::vector<std::string>& names);
bool contains_inverse(const EquationProgram& p);
void for_each_expr(const EquationProgram& p, const std::function<void(const Expr&)>& f);

}  // namespace redsimp
