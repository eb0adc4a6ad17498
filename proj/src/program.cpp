// SPDX-License-Identifier: Apache-2.0
#include "redsimp/program.hpp"

#include <functional>
#include <set>

#include "redsimp/scanner.hpp"

namespace redsimp {

const FiberScanner& Expr::scanner() const {
  std::call_once(scanner_once_, [&] {
    scanner_ = std::make_shared<const FiberScanner>(*reduction);
  });
  return *scanner_;
}

namespace {

// Inverse of an injective square write map, if it exists.
std::optional<AffineMap> write_inverse(const Reduction& r) {
  const std::size_t d = r.d();
  if (r.answer_dim() != d) return std::nullopt;
  RatMatrix inv(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    auto col = solve_linear(r.write.matrix, unit_vector(d, j));
    if (!col) return std::nullopt;
    for (std::size_t i = 0; i < d; ++i) inv.at(i, j) = (*col)[i];
  }
  RatVector p = inv.apply(r.write.param_col), c = inv.apply(r.write.const_col);
  for (auto& q : p) q = -q;
  for (auto& q : c) q = -q;
  return AffineMap(inv, p, c);
}

}  // namespace

ExprPtr make_reduce(Reduction r) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Reduce;
  e->op = r.op;
  e->var = r.source;
  if (r.a() == 0) {
    if (auto inv = write_inverse(r)) {
      e->kind = ExprKind::Input;
      e->index = *inv;
    }
  }
  e->reduction = std::make_shared<const Reduction>(std::move(r));
  return e;
}

ExprPtr make_ref(std::string var, AffineMap index) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Ref;
  e->var = std::move(var);
  e->index = std::move(index);
  return e;
}

ExprPtr make_combine(const Operator& op, std::vector<ExprPtr> args) {
  if (args.size() == 1) return args[0];
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Combine;
  e->op = op;
  e->args = std::move(args);
  return e;
}

ExprPtr make_inverse(const Operator& op, ExprPtr base, std::vector<ExprPtr> removed) {
  if (removed.empty()) return base;
  if (!op.has_inverse()) throw InvariantViolation("inverse of " + op.name());
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::InverseCombine;
  e->op = op;
  e->args.push_back(std::move(base));
  for (auto& x : removed) e->args.push_back(std::move(x));
  return e;
}

ExprPtr make_fractal(std::shared_ptr<const FractalNode> f, std::size_t answer_dim) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Fractal;
  e->op = f->triangle.op;
  e->var = f->name;
  e->index = AffineMap::identity(answer_dim);
  e->fractal = std::move(f);
  return e;
}

ExprPtr make_family(std::shared_ptr<const FamilyNode> f, std::size_t answer_dim) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Family;
  e->op = f->member.equations.empty() ? Operator{} : f->member.equations[0].op;
  e->var = f->name;
  e->index = AffineMap::identity(answer_dim);
  e->family = std::move(f);
  return e;
}

const Equation* EquationProgram::find(const std::string& var) const {
  for (const auto& e : equations)
    if (e.var == var) return &e;
  return nullptr;
}

// ---------------------------------------------------------------- printing

namespace {

std::string bracket(const std::vector<std::string>& rows) {
  std::string s = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) s += ",";
    s += rows[i];
  }
  return s + "]";
}

std::string combine_string(const Operator& op, const std::vector<std::string>& parts) {
  std::string s;
  if (op.kind == OpKind::Sum || op.kind == OpKind::Product) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += op.kind == OpKind::Sum ? " + " : " * ";
      s += parts[i];
    }
    return s;
  }
  s = op.name() + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ", ";
    s += parts[i];
  }
  return s + ")";
}

}  // namespace

std::string expr_string(const Expr& e, const std::vector<std::string>& names) {
  switch (e.kind) {
    case ExprKind::Reduce: {
      const Reduction& r = *e.reduction;
      auto zn = default_names(r.d());
      for (auto& n : zn) n = n + "'";
      return "reduce(" + r.op.name() + ", " + r.write.str(zn) + ", " + r.source +
             bracket(r.read.row_strings(zn)) + " : " + r.body.str(zn) + ")";
    }
    case ExprKind::Input: {
      AffineMap acc = e.reduction->read.compose(e.index);
      return e.reduction->source + bracket(acc.row_strings(names));
    }
    case ExprKind::Ref:
      return e.var + bracket(e.index.row_strings(names));
    case ExprKind::Combine: {
      std::vector<std::string> parts;
      for (const auto& a : e.args) parts.push_back(expr_string(*a, names));
      return combine_string(e.op, parts);
    }
    case ExprKind::InverseCombine: {
      std::string s = "(" + expr_string(*e.args[0], names);
      for (std::size_t i = 1; i < e.args.size(); ++i)
        s += (e.op.kind == OpKind::Sum ? " - " : " / ") + expr_string(*e.args[i], names);
      return s + ")";
    }
    case ExprKind::Fractal:
      return e.var + "(N)" + bracket(e.index.row_strings(names));
    case ExprKind::Family:
      return e.var + bracket(e.index.row_strings(names));
  }
  return "?";
}

namespace {

void program_lines(const EquationProgram& p, const std::string& indent, std::string& out);

void node_lines(const Expr& e, const std::string& indent, std::string& out,
                std::set<const void*>& seen) {
  if (e.kind == ExprKind::Fractal && seen.insert(e.fractal.get()).second) {
    out += indent + e.fractal->describe() + "\n";
    program_lines(e.fractal->level, indent + "  ", out);
  }
  if (e.kind == ExprKind::Family && seen.insert(e.family.get()).second) {
    out += indent + e.family->describe() + "\n";
    program_lines(e.family->member, indent + "  ", out);
  }
  for (const auto& a : e.args) node_lines(*a, indent, out, seen);
}

void program_lines(const EquationProgram& p, const std::string& indent, std::string& out) {
  std::set<const void*> seen;
  for (const auto& eq : p.equations) {
    auto names = default_names(eq.dim);
    out += indent + eq.var + bracket(names) + " =\n";
    for (const auto& b : eq.branches) {
      std::string guard = b.guard.str(names);
      out += indent + "  " + guard + " : " + expr_string(*b.expr, names) + "\n";
    }
    for (const auto& b : eq.branches) node_lines(*b.expr, indent + "    ", out, seen);
  }
}

}  // namespace

std::string EquationProgram::str() const {
  std::string out;
  program_lines(*this, "", out);
  return out;
}

std::string FractalNode::describe() const {
  std::vector<std::string> uv = {"u", "v"};
  return name + ": fractal over " + triangle.body.str(uv) + ", scale " +
         scale.get_str() + ", threshold " + std::to_string(threshold) +
         ", cuts " + alpha_cut.with_equality(true).str(uv) + " and " +
         beta_cut.with_equality(true).str(uv);
}

std::string FamilyNode::describe() const {
  return name + ": " + family.describe();
}

// ---------------------------------------------------------------- traversal

namespace {

void visit(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  for (const auto& a : e.args) visit(*a, f);
  if (e.fractal) for_each_expr(e.fractal->level, f);
  if (e.family) for_each_expr(e.family->member, f);
}

}  // namespace

void for_each_expr(const EquationProgram& p, const std::function<void(const Expr&)>& f) {
  for (const auto& eq : p.equations)
    for (const auto& b : eq.branches) visit(*b.expr, f);
}

bool contains_inverse(const EquationProgram& p) {
  bool found = false;
  for_each_expr(p, [&](const Expr& e) {
    if (e.kind == ExprKind::InverseCombine) found = true;
  });
  return found;
}

// ---------------------------------------------------------------- renaming

namespace {

std::string renamed(const std::string& v, const std::string& from, const std::string& to) {
  if (v.compare(0, from.size(), from) == 0) return to + v.substr(from.size());
  return v;
}

}  // namespace

ExprPtr rename_expr(const ExprPtr& e, const std::string& from, const std::string& to) {
  auto c = std::make_shared<Expr>();
  c->kind = e->kind;
  c->op = e->op;
  c->var = e->var;
  c->index = e->index;
  c->fractal = e->fractal;
  c->family = e->family;
  c->reduction = e->reduction;
  if (e->kind == ExprKind::Ref) c->var = renamed(e->var, from, to);
  if ((e->kind == ExprKind::Reduce || e->kind == ExprKind::Input) &&
      renamed(e->reduction->source, from, to) != e->reduction->source) {
    Reduction r = *e->reduction;
    r.source = renamed(r.source, from, to);
    c->var = r.source;
    c->reduction = std::make_shared<const Reduction>(std::move(r));
  }
  if (e->kind == ExprKind::Family &&
      renamed(e->family->family.source, from, to) != e->family->family.source) {
    auto f = std::make_shared<FamilyNode>(*e->family);
    f->family.source = renamed(f->family.source, from, to);
    c->family = f;
  }
  for (const auto& a : e->args) c->args.push_back(rename_expr(a, from, to));
  return c;
}

EquationProgram rename_variables(const EquationProgram& p, const std::string& from,
                                 const std::string& to) {
  EquationProgram out = p;
  out.output = renamed(p.output, from, to);
  for (auto& eq : out.equations) {
    eq.var = renamed(eq.var, from, to);
    for (auto& b : eq.branches) b.expr = rename_expr(b.expr, from, to);
  }
  return out;
}

// ---------------------------------------------------------------- diagnostics

namespace {

void collect_deps(const Expr& e, const std::string& self, std::set<std::string>& deps,
                  std::vector<Diagnostic>& diags) {
  switch (e.kind) {
    case ExprKind::Ref: {
      bool shift = e.index.matrix == RatMatrix::identity(e.index.in_dim()) &&
                   !e.index.has_param() && e.index.in_dim() == e.index.out_dim();
      if (e.var == self) {
        if (!shift || is_zero(e.index.const_col))
          diags.push_back({"error", "self reference of " + self + " is not a translation"});
        else
          diags.push_back({"note", "recurrence of " + self + " along " +
                                       to_string(scaled(e.index.const_col, -1))});
      } else {
        deps.insert(e.var);
      }
      break;
    }
    case ExprKind::Reduce:
    case ExprKind::Input:
      deps.insert(e.reduction->source);
      break;
    case ExprKind::Family:
      deps.insert(e.family->family.source);
      break;
    default:
      break;
  }
  for (const auto& a : e.args) collect_deps(*a, self, deps, diags);
}

}  // namespace

std::vector<Diagnostic> evaluate_branch_wellformedness(const EquationProgram& p) {
  std::vector<Diagnostic> diags;
  std::map<std::string, std::set<std::string>> graph;
  for (const auto& eq : p.equations) {
    auto names = default_names(eq.dim);
    for (std::size_t a = 0; a < eq.branches.size(); ++a)
      for (std::size_t b = a + 1; b < eq.branches.size(); ++b) {
        Polyhedron both = eq.branches[a].guard.intersect(eq.branches[b].guard);
        if (!both.is_empty())
          diags.push_back({"error", "guards overlap on " + both.str(names)});
      }
    std::vector<Polyhedron> rest = {eq.domain};
    for (const auto& b : eq.branches) {
      std::vector<Polyhedron> next;
      for (const auto& piece : rest)
        for (auto& q : set_difference(piece, b.guard).pieces) next.push_back(q);
      rest = std::move(next);
    }
    for (const auto& q : rest)
      diags.push_back({"error", "guards of " + eq.var + " do not cover " + q.str(names)});
    auto& deps = graph[eq.var];
    for (const auto& b : eq.branches) {
      collect_deps(*b.expr, eq.var, deps, diags);
      bool inverse = false;
      visit(*b.expr, [&](const Expr& e) {
        if (e.kind == ExprKind::InverseCombine && !e.op.has_inverse()) inverse = true;
      });
      if (inverse)
        diags.push_back({"error", eq.var + " uses an inverse of a non-invertible operator"});
    }
  }
  // Cycles among equations.
  std::map<std::string, int> state;
  std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
    if (!graph.count(v)) return false;
    if (state[v] == 1) return true;
    if (state[v] == 2) return false;
    state[v] = 1;
    for (const auto& w : graph[v])
      if (dfs(w)) return true;
    state[v] = 2;
    return false;
  };
  for (const auto& [v, deps] : graph)
    if (dfs(v)) {
      diags.push_back({"error", "cyclic dependence through " + v});
      break;
    }
  for (const auto& [v, deps] : graph)
    for (const auto& w : deps)
      if (!graph.count(w) && !p.inputs.count(w))
        diags.push_back({"error", v + " reads undefined variable " + w});
  return diags;
}

}  // namespace redsimp
