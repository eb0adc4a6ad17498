// SPDX-License-Identifier: Apache-2.0
#include "redsimp/engine.hpp"

#include <algorithm>
#include <sstream>

namespace redsimp {

// ---------------------------------------------------------------- plans

std::string to_string(PlanKind k) {
  switch (k) {
    case PlanKind::Leaf: return "Leaf";
    case PlanKind::Scan: return "Scan";
    case PlanKind::Simplify: return "Simplify";
    case PlanKind::Decompose: return "Decompose";
    case PlanKind::Split: return "Split";
    case PlanKind::Fractal: return "Fractal";
    case PlanKind::Family: return "Family";
  }
  return "?";
}

std::optional<PlanKind> parse_plan_kind(const std::string& s) {
  for (PlanKind k : {PlanKind::Leaf, PlanKind::Scan, PlanKind::Simplify, PlanKind::Decompose,
                     PlanKind::Split, PlanKind::Fractal, PlanKind::Family})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace {

void plan_lines(const PlanNode& p, std::size_t depth, std::string& out) {
  out += std::string(2 * depth, ' ') + to_string(p.kind);
  if (!p.detail.empty()) out += "(" + p.detail + ")";
  out += " [degree " + std::to_string(p.degree) + "]\n";
  for (const auto& c : p.children) plan_lines(*c, depth + 1, out);
}

void serial_lines(const PlanNode& p, std::size_t depth, std::string& out) {
  out += std::to_string(depth) + "\t" + to_string(p.kind) + "\t" + std::to_string(p.degree) +
         "\t" + p.detail + "\n";
  for (const auto& c : p.children) serial_lines(*c, depth + 1, out);
}

}  // namespace

std::string plan_string(const PlanNode& p) {
  std::string out;
  plan_lines(p, 0, out);
  return out;
}

std::string serialize_plan(const PlanNode& p) {
  std::string out = "redsimp-plan v1\n";
  serial_lines(p, 0, out);
  return out;
}

PlanPtr parse_plan(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "redsimp-plan v1")
    throw ParseError("missing plan header", 1, 1);
  std::vector<std::shared_ptr<PlanNode>> stack;
  std::shared_ptr<PlanNode> root;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      std::size_t t = line.find('\t', pos);
      if (t == std::string::npos) throw ParseError("malformed plan line", lineno, 1);
      f.push_back(line.substr(pos, t - pos));
      pos = t + 1;
    }
    f.push_back(line.substr(pos));
    auto node = std::make_shared<PlanNode>();
    auto kind = parse_plan_kind(f[1]);
    if (!kind) throw ParseError("unknown plan kind " + f[1], lineno, 1);
    node->kind = *kind;
    std::size_t depth = 0;
    try {
      depth = std::stoul(f[0]);
      node->degree = std::stoi(f[2]);
    } catch (const std::exception&) {
      throw ParseError("malformed plan numbers", lineno, 1);
    }
    node->detail = f[3];
    if (depth == 0) {
      if (root) throw ParseError("second plan root", lineno, 1);
      root = node;
      stack = {node};
      continue;
    }
    if (depth > stack.size() || !root) throw ParseError("plan depth jumps", lineno, 1);
    stack.resize(depth);
    stack.back()->children.push_back(node);
    stack.push_back(node);
  }
  if (!root) throw ParseError("empty plan", lineno, 1);
  return root;
}

void for_each_plan(const PlanNode& p, const std::function<void(const PlanNode&)>& f) {
  f(p);
  for (const auto& c : p.children) for_each_plan(*c, f);
}

std::size_t plan_count(const PlanNode& p, PlanKind k) {
  std::size_t n = 0;
  for_each_plan(p, [&](const PlanNode& q) { n += q.kind == k; });
  return n;
}

std::string Cost::str() const {
  return "(" + std::to_string(degree) + ", " + std::to_string(pieces) + ", " +
         std::to_string(faces) + ")";
}

// ---------------------------------------------------------------- cost model

namespace {

int expr_degree(const Expr& e) {
  int d = 0;
  switch (e.kind) {
    case ExprKind::Reduce:
    case ExprKind::Input:
      d = e.reduction->body.asymptotic_degree();
      break;
    case ExprKind::Fractal:
      d = std::max(1, cost_of(e.fractal->level));
      break;
    case ExprKind::Family:
      d = std::max(0, e.family->family.context.asymptotic_degree()) + cost_of(e.family->member);
      break;
    default:
      break;
  }
  for (const auto& a : e.args) d = std::max(d, expr_degree(*a));
  return d;
}

int degree_of(const std::vector<Equation>& eqs, const ExprPtr& expr) {
  int d = expr ? expr_degree(*expr) : 0;
  for (const auto& eq : eqs)
    for (const auto& b : eq.branches)
      d = std::max({d, b.guard.asymptotic_degree(), expr_degree(*b.expr)});
  return std::max(d, 0);
}

std::size_t count_reduce(const Expr& e) {
  std::size_t n = e.kind == ExprKind::Reduce || e.kind == ExprKind::Input ||
                  e.kind == ExprKind::InverseCombine;
  for (const auto& a : e.args) n += count_reduce(*a);
  return n;
}

std::size_t pieces_of(const std::vector<Equation>& eqs, const ExprPtr& expr) {
  std::size_t n = expr ? count_reduce(*expr) : 0;
  for (const auto& eq : eqs)
    for (const auto& b : eq.branches) n += 1 + count_reduce(*b.expr);
  return n;
}

bool is_ref_to(const ExprPtr& e, const std::string& var) {
  return e->kind == ExprKind::Ref && e->var == var &&
         e->index == AffineMap::identity(e->index.in_dim());
}

Solution embedded(const Solution& s, const std::string& tag) {
  const std::string to = "@." + tag;
  EquationProgram p;
  p.equations = s.equations;
  p = rename_variables(p, "@", to);
  Solution out = s;
  out.equations = std::move(p.equations);
  out.expr = rename_expr(s.expr, "@", to);
  return out;
}

void rename_in(std::vector<Equation>& eqs, ExprPtr& expr, const std::string& from,
               const std::string& to) {
  EquationProgram p;
  p.equations = std::move(eqs);
  p = rename_variables(p, from, to);
  eqs = std::move(p.equations);
  expr = rename_expr(expr, from, to);
}

// Name holding the values of an embedded child, adding an equation if needed.
std::string materialize(const Solution& child, const std::string& tag, const Reduction& r,
                        std::vector<Equation>& eqs) {
  const std::string var = "@." + tag;
  eqs.insert(eqs.end(), child.equations.begin(), child.equations.end());
  if (is_ref_to(child.expr, var)) return var;
  Equation eq;
  eq.var = var;
  eq.dim = r.answer_dim();
  eq.op = r.op;
  eq.domain = project(r.body, r.write);
  eq.branches.push_back({eq.domain, child.expr});
  eqs.push_back(std::move(eq));
  return var;
}

std::string vec_string(const IntVector& v) { return to_string(to_rational(v)); }

PlanPtr plan_node(PlanKind k, std::string detail, int degree, std::vector<PlanPtr> kids = {}) {
  auto p = std::make_shared<PlanNode>();
  p->kind = k;
  p->detail = std::move(detail);
  p->degree = degree;
  p->children = std::move(kids);
  return p;
}

PlanPtr split_plan(const Constraint& cut, int degree, std::vector<PlanPtr> kids) {
  auto p = std::make_shared<PlanNode>();
  p->kind = PlanKind::Split;
  Constraint h = cut.with_equality(true);
  p->detail = h.str(default_names(h.dim()));
  p->cut = h;
  p->degree = degree;
  p->children = std::move(kids);
  return p;
}

bool skippable(const std::exception& e) {
  return dynamic_cast<const UnsupportedInput*>(&e) || dynamic_cast<const NonSeparating*>(&e) ||
         dynamic_cast<const DimensionMismatch*>(&e);
}

}  // namespace

int cost_of(const EquationProgram& p) { return degree_of(p.equations, nullptr); }

void assert_termination(const Reduction& parent, const std::vector<Reduction>& pieces) {
  const std::size_t before = residual_count(parent);
  for (const auto& q : pieces)
    if (residual_count(q) >= before)
      throw InvariantViolation("split does not reduce the residual facets");
}

// ---------------------------------------------------------------- engine

Solution Engine::finish(const Reduction& r, PlanKind kind, std::string detail,
                        std::vector<Equation> eqs, ExprPtr expr, std::vector<PlanPtr> children,
                        std::size_t faces) const {
  (void)r;
  Solution s;
  s.cost.degree = degree_of(eqs, expr);
  s.cost.pieces = pieces_of(eqs, expr);
  s.cost.faces = faces;
  s.plan = plan_node(kind, std::move(detail), s.cost.degree, std::move(children));
  s.equations = std::move(eqs);
  s.expr = std::move(expr);
  return s;
}

Solution Engine::leaf(const Reduction& r) const {
  ExprPtr e = make_reduce(r);
  std::string detail = e->kind == ExprKind::Input ? "point" : "fold";
  return finish(r, PlanKind::Leaf, detail, {}, e, {}, 0);
}

Solution Engine::solve(const Reduction& r, std::size_t depth) {
  if (depth > opt_.max_depth) throw InvariantViolation("simplification depth exceeded");
  const std::string key = r.key();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  ++explored_;
  Solution s;
  std::optional<std::pair<Reduction, Reindexing>> rp;
  try {
    rp = reparametrize(r);
  } catch (const UnsupportedInput&) {
    rp.reset();
    s = leaf(r);
  }
  if (rp)
    s = solve(rp->first, depth + 1);
  else if (!s.plan)
    s = search(r, depth);
  memo_.emplace(key, s);
  return s;
}

Solution Engine::search(const Reduction& r, std::size_t depth) {
  Solution best = leaf(r);
  if (r.body.is_empty() || r.a() == 0 || r.r() == 0) return best;
  const int target = std::max(0, project(r.body, r.write).asymptotic_degree());
  if (best.cost.degree <= target) return best;

  auto consider = [&](std::vector<Solution> cands) {
    for (auto& c : cands)
      if (c.cost < best.cost) best = std::move(c);
    return best.cost.degree <= target;
  };
  const auto facets = classify_facets(r);
  bool found = false;
  auto group = [&](std::vector<Solution> cands) {
    found = found || !cands.empty();
    return consider(std::move(cands));
  };
  if (group(simplify_candidates(r, facets, depth))) return best;
  if (group(decomposition_candidates(r, facets, depth))) return best;
  if (group(family_candidates(r, depth))) return best;
  if (!found) consider(split_candidates(r, depth));
  return best;
}

std::vector<Solution> Engine::simplify_candidates(const Reduction& r,
                                                  const std::vector<FacetClass>& facets,
                                                  std::size_t depth) {
  std::vector<Solution> out;
  if (facets.size() > 12) return out;
  auto ls = enumerate_labelings(r, facets, r.reuse_space);
  auto adm = admissible_labelings(r, ls, facets);
  for (const auto& l : ls) {
    const bool admissible =
        std::any_of(adm.begin(), adm.end(), [&](const Labeling& x) { return x.signs == l.signs; });
    bool quiet = true;
    for (std::size_t k = 0; k < facets.size(); ++k)
      if (facets[k].residual && l.signs[k] != 0) quiet = false;
    if (!admissible && !quiet) continue;
    try {
      SingleStep parts = single_step_parts(r, l.witness);
      if (quiet && parts.pure_copy()) {
        if (auto c = collapse_candidate(r, parts, depth)) out.push_back(std::move(*c));
      }
      if (!admissible) continue;
      if (!parts.exit.empty() && !r.op.has_inverse()) continue;
      std::vector<Equation> eqs;
      std::vector<PlanPtr> kids;
      bool all_leaf = true;
      std::size_t idx = 0, faces = facets.size();
      SubSolver solver = [&](const Reduction& sub) {
        Solution cs = solve(sub, depth + 1);
        if (cs.plan->kind != PlanKind::Leaf) {
          all_leaf = false;
          kids.push_back(cs.plan);
        }
        faces += cs.cost.faces;
        Solution e = embedded(cs, "s" + std::to_string(idx++));
        eqs.insert(eqs.end(), e.equations.begin(), e.equations.end());
        return e.expr;
      };
      Equation eq = build_single_step(r, parts, "@", solver);
      eqs.insert(eqs.begin(), std::move(eq));
      Solution s = finish(r, all_leaf ? PlanKind::Scan : PlanKind::Simplify,
                          "rho=" + vec_string(l.witness), std::move(eqs),
                          make_ref("@", AffineMap::identity(r.answer_dim())), std::move(kids),
                          faces);
      auto p = std::const_pointer_cast<PlanNode>(s.plan);
      p->rho = l.witness;
      out.push_back(std::move(s));
    } catch (const std::exception& e) {
      if (!skippable(e)) throw;
    }
  }
  return out;
}

std::optional<Solution> Engine::collapse_candidate(const Reduction& r, const SingleStep& parts,
                                                   std::size_t depth) {
  auto c = collapse_copy(r, parts);
  if (!c) return std::nullopt;
  Solution ws = solve(c->w, depth + 1);
  std::vector<Equation> eqs;
  std::string var = materialize(embedded(ws, "W"), "W", c->w, eqs);
  Equation eq;
  eq.var = "@";
  eq.dim = r.answer_dim();
  eq.op = r.op;
  eq.domain = parts.answers;
  eq.branches.push_back({parts.answers, make_ref(var, c->pi)});
  eqs.insert(eqs.begin(), std::move(eq));
  Solution s = finish(r, PlanKind::Simplify, "collapse rho=" + vec_string(parts.rho),
                      std::move(eqs), make_ref("@", AffineMap::identity(r.answer_dim())),
                      {ws.plan}, ws.cost.faces);
  std::const_pointer_cast<PlanNode>(s.plan)->rho = parts.rho;
  return s;
}

std::optional<std::pair<Reduction, Collapse>> Engine::inner_collapse(const Reduction& inner) {
  const auto facets = classify_facets(inner);
  if (facets.size() > 12) return std::nullopt;
  for (const auto& l : enumerate_labelings(inner, facets, inner.reuse_space)) {
    bool quiet = true;
    for (std::size_t k = 0; k < facets.size(); ++k)
      if (facets[k].residual && l.signs[k] != 0) quiet = false;
    if (!quiet) continue;
    try {
      SingleStep parts = single_step_parts(inner, l.witness);
      if (auto c = collapse_copy(inner, parts)) {
        Reduction w = c->w;
        return std::make_pair(std::move(w), std::move(*c));
      }
    } catch (const std::exception& e) {
      if (!skippable(e)) throw;
    }
  }
  return std::nullopt;
}

std::vector<Solution> Engine::decomposition_candidates(const Reduction& r,
                                                       const std::vector<FacetClass>& facets,
                                                       std::size_t depth) {
  std::vector<Solution> out;
  if (r.a() < 2) return out;
  const std::string zph = "#Z" + std::to_string(depth) + "#";
  const std::string wph = "#W" + std::to_string(depth) + "#";
  for (const auto& target : decomposition_targets(r, facets)) {
    try {
      Decomposition dec = decompose_reduction(r, target, zph);
      std::vector<IntVector> basis = target.integer_basis();
      std::string detail = "inner accumulation span{";
      for (std::size_t k = 0; k < basis.size(); ++k)
        detail += (k ? "," : "") + vec_string(basis[k]);
      detail += "}";
      if (auto ic = inner_collapse(dec.inner)) {
        const Reduction& w = ic->first;
        Reduction outer = make_reduction(dec.outer.body, dec.outer.write, ic->second.pi,
                                         r.op, wph, false);
        Solution ws = solve(w, depth + 1);
        Solution os = solve(outer, depth + 1);
        std::vector<Equation> eqs;
        std::string var = materialize(embedded(ws, "W"), "W", w, eqs);
        Solution eo = embedded(os, "O");
        rename_in(eo.equations, eo.expr, wph, var);
        eqs.insert(eqs.end(), eo.equations.begin(), eo.equations.end());
        auto collapse = plan_node(PlanKind::Simplify, "collapse of the inner reduction",
                                  ws.cost.degree, {ws.plan});
        out.push_back(finish(r, PlanKind::Decompose, detail, std::move(eqs), eo.expr,
                             {collapse, os.plan},
                             facets.size() + ws.cost.faces + os.cost.faces));
      }
      Solution is = solve(dec.inner, depth + 1);
      Solution os = solve(dec.outer, depth + 1);
      std::vector<Equation> eqs;
      std::string var = materialize(embedded(is, "Z"), "Z", dec.inner, eqs);
      Solution eo = embedded(os, "O");
      rename_in(eo.equations, eo.expr, zph, var);
      eqs.insert(eqs.end(), eo.equations.begin(), eo.equations.end());
      out.push_back(finish(r, PlanKind::Decompose, detail, std::move(eqs), eo.expr,
                           {is.plan, os.plan},
                           facets.size() + is.cost.faces + os.cost.faces));
    } catch (const std::exception& e) {
      if (!skippable(e)) throw;
    }
  }
  return out;
}

EquationProgram Engine::program(const Reduction& r, const Solution& s,
                                const std::string& var) const {
  EquationProgram p;
  p.equations = s.equations;
  if (!is_ref_to(s.expr, "@")) {
    Equation eq;
    eq.var = "@";
    eq.dim = r.answer_dim();
    eq.op = r.op;
    eq.domain = project(r.body, r.write);
    eq.branches.push_back({eq.domain, s.expr});
    p.equations.insert(p.equations.begin(), std::move(eq));
  }
  p = rename_variables(p, "@", var);
  p.output = var;
  p.inputs[r.source] = r.read.out_dim();
  p.param_lb = r.param_lb();
  return p;
}

std::vector<Solution> Engine::family_candidates(const Reduction& r, std::size_t depth) {
  std::vector<Solution> out;
  if (r.a() + r.r() >= r.d()) return out;
  if (intersect_subspaces(r.acc_space, r.reuse_space).dim() != 0) return out;
  std::vector<IndependentFamily> fams;
  try {
    fams = factor_independent(r);
  } catch (const std::exception& e) {
    if (!skippable(e)) throw;
    return out;
  }
  std::size_t tried = 0;
  for (auto& f : fams) {
    if (f.context_dim == 0 || tried == 2) continue;
    ++tried;
    try {
      Solution ms = solve(f.member, depth + 1);
      auto node = std::make_shared<FamilyNode>();
      node->name = "family";
      node->family = f;
      node->member = program(f.member, ms, "M");
      node->member.param_name = "s";
      ExprPtr e = make_family(node, r.answer_dim());
      out.push_back(finish(r, PlanKind::Family, f.describe(), {}, e, {ms.plan}, ms.cost.faces));
    } catch (const std::exception& e) {
      if (!skippable(e)) throw;
    }
  }
  return out;
}

std::optional<Solution> Engine::fractal_candidate(const Reduction& r, std::size_t depth) {
  if (r.d() != 2 || r.a() != 1 || r.r() != 1) return std::nullopt;
  std::vector<IndependentFamily> fams;
  try {
    fams = factor_independent(r);
  } catch (const std::exception& e) {
    if (!skippable(e)) throw;
    return std::nullopt;
  }
  for (auto& f : fams) {
    if (f.context_dim != 0) continue;
    auto geo = fractal_geometry(f.member, opt_.fractal_threshold, "fractal");
    if (!geo) continue;
    try {
      std::vector<Equation> eqs;
      std::vector<PlanPtr> kids;
      std::size_t idx = 0, faces = 3;
      SubSolver solver = [&](const Reduction& sub) {
        Solution cs = solve(sub, depth + 1);
        kids.push_back(cs.plan);
        faces += cs.cost.faces;
        Solution e = embedded(cs, "p" + std::to_string(idx++));
        eqs.insert(eqs.end(), e.equations.begin(), e.equations.end());
        return e.expr;
      };
      Equation level = build_split(geo->outside, geo->pieces, "@", solver);
      eqs.insert(eqs.begin(), std::move(level));
      EquationProgram lp;
      lp.equations = std::move(eqs);
      lp = rename_variables(lp, "@", "L");
      lp.output = "L";
      lp.inputs["X"] = 1;
      lp.param_lb = geo->outside.param_lb();
      lp.param_name = "s";
      auto node = geo->node;
      node->level = std::move(lp);

      const Reduction& m = f.member;
      Equation feq;
      feq.var = "F";
      feq.dim = m.answer_dim();
      feq.op = m.op;
      feq.domain = node->answers;
      feq.branches.push_back({node->answers, make_fractal(node, m.answer_dim())});
      auto fam = std::make_shared<FamilyNode>();
      fam->name = "family";
      fam->family = f;
      fam->member.equations.push_back(std::move(feq));
      fam->member.output = "F";
      fam->member.inputs["X"] = 1;
      fam->member.param_lb = m.param_lb();
      fam->member.param_name = "s";
      ExprPtr e = make_family(fam, r.answer_dim());

      const int deg = std::max(1, cost_of(node->level));
      auto beta = split_plan(node->beta_cut, deg, kids);
      auto recurse = plan_node(PlanKind::Fractal, "recurse", deg);
      auto alpha = split_plan(node->alpha_cut, deg, {recurse, beta});
      std::string detail = "scale " + node->scale.get_str() + ", threshold " +
                           std::to_string(node->threshold);
      Solution s = finish(r, f.trivial ? PlanKind::Fractal : PlanKind::Family,
                          f.trivial ? detail : f.describe(), {}, e, {}, faces);
      auto p = std::const_pointer_cast<PlanNode>(s.plan);
      if (f.trivial)
        p->children = {alpha};
      else
        p->children = {plan_node(PlanKind::Fractal, detail, deg, {alpha})};
      return s;
    } catch (const std::exception& e) {
      if (!skippable(e)) throw;
    }
  }
  return std::nullopt;
}

std::vector<Solution> Engine::split_candidates(const Reduction& r, std::size_t depth) {
  std::vector<Solution> out;
  if (auto fs = fractal_candidate(r, depth)) {
    out.push_back(std::move(*fs));
    return out;
  }
  std::vector<SplitCandidate> cands;
  try {
    cands = spb_spi_candidates(r);
  } catch (const std::exception& e) {
    if (!skippable(e)) throw;
  }
  const std::size_t before = residual_count(r);
  auto solve_pieces = [&](const std::vector<Reduction>& pieces, std::vector<PlanPtr>& kids,
                          std::vector<Equation>& eqs, std::size_t& faces) {
    std::size_t idx = 0;
    SubSolver solver = [&](const Reduction& sub) {
      Solution cs = solve(sub, depth + 1);
      kids.push_back(cs.plan);
      faces += cs.cost.faces;
      Solution e = embedded(cs, "p" + std::to_string(idx++));
      eqs.insert(eqs.end(), e.equations.begin(), e.equations.end());
      return e.expr;
    };
    Equation eq = build_split(r, pieces, "@", solver);
    eqs.insert(eqs.begin(), std::move(eq));
  };
  std::size_t tried = 0;
  for (const auto& c : cands) {
    if (tried == opt_.split_budget) break;
    try {
      auto [p1, p2] = split_by_hyperplane(r.body, c.hyperplane.with_equality(false));
      std::vector<Reduction> pieces{
          make_reduction(p1, r.write, r.read, r.op, r.source, false),
          make_reduction(p2, r.write, r.read, r.op, r.source, false)};
      if (residual_count(pieces[0]) >= before || residual_count(pieces[1]) >= before) continue;
      assert_termination(r, pieces);
      ++tried;
      std::vector<PlanPtr> kids;
      std::vector<Equation> eqs;
      std::size_t faces = 0;
      solve_pieces(pieces, kids, eqs, faces);
      Solution s = finish(r, PlanKind::Split, "", std::move(eqs),
                          make_ref("@", AffineMap::identity(r.answer_dim())), {}, faces);
      auto p = std::const_pointer_cast<PlanNode>(s.plan);
      *p = *split_plan(c.hyperplane, s.cost.degree, kids);
      p->detail = to_string(c.kind) + " " + p->detail;
      out.push_back(std::move(s));
    } catch (const std::exception& e) {
      if (!skippable(e)) throw;
    }
  }
  if (!out.empty() || r.d() > 3) return out;
  try {
    if (is_simplex(r.body) || !is_bounded(r.body)) return out;
    std::vector<Reduction> pieces;
    for (auto& t : triangulate(r.body))
      if (!t.is_empty()) pieces.push_back(make_reduction(t, r.write, r.read, r.op, r.source, false));
    if (pieces.size() < 2) return out;
    std::vector<PlanPtr> kids;
    std::vector<Equation> eqs;
    std::size_t faces = 0;
    solve_pieces(pieces, kids, eqs, faces);
    out.push_back(finish(r, PlanKind::Split, "triangulation", std::move(eqs),
                         make_ref("@", AffineMap::identity(r.answer_dim())), std::move(kids),
                         faces));
  } catch (const std::exception& e) {
    if (!skippable(e)) throw;
  }
  return out;
}

// ---------------------------------------------------------------- entry points

SimplifyResult simplify_max(const Reduction& r, const EngineOptions& o, const std::string& var) {
  Engine e(o);
  Solution s = e.solve(r);
  return {e.program(r, s, var), s.plan, s.cost};
}

SimplifyResult fractal_simplify(const Reduction& r, long threshold, const std::string& var) {
  EngineOptions o;
  o.fractal_threshold = threshold;
  Engine e(o);
  auto s = e.try_fractal(r);
  if (!s) throw UnsupportedInput("fractal scheme does not apply");
  return {e.program(r, *s, var), s->plan, s->cost};
}

}  // namespace redsimp
