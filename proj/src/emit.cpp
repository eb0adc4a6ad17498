// SPDX-License-Identifier: Apache-2.0
#include "redsimp/emit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace redsimp {

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "v" + out;
  return out;
}

bool is_ident(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

void add_term(std::string& s, const Int& k, const std::string& name) {
  if (k == 0) return;
  std::string mag;
  Int a = abs(k);
  if (name.empty())
    mag = a.get_str();
  else {
    const std::string n = is_ident(name) ? name : "(" + name + ")";
    mag = a == 1 ? n : a.get_str() + "*" + n;
  }
  if (s.empty())
    s = (k < 0 ? "-" : "") + mag;
  else
    s += (k < 0 ? " - " : " + ") + mag;
}

// Integer affine text over arbitrary sub-expressions.
std::string int_text(const IntVector& c, const std::vector<std::string>& names, const Int& p,
                     const std::string& pname, const Int& k) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) add_term(s, c[i], names.at(i));
  add_term(s, p, pname);
  add_term(s, k, "");
  return s.empty() ? "0" : s;
}

std::string rat_text(const RatVector& c, const std::vector<std::string>& names,
                     const Rational& p, const std::string& pname, const Rational& k) {
  Int den = 1;
  auto upd = [&](const Rational& q) { den = lcm(den, Int(q.get_den())); };
  for (const auto& q : c) upd(q);
  upd(p);
  upd(k);
  IntVector ic;
  for (const auto& q : c) ic.push_back(Int(q * den));
  std::string s = int_text(ic, names, Int(p * den), pname, Int(k * den));
  if (den == 1) return s;
  return "(" + s + ") / " + den.get_str();
}

std::vector<std::string> apply_map(const AffineMap& m, const std::vector<std::string>& in,
                                   const std::string& pname) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < m.out_dim(); ++r)
    out.push_back(rat_text(m.matrix.row(r), in, m.param_col[r], pname, m.const_col[r]));
  return out;
}

std::string nested(const std::string& f, const std::vector<std::string>& xs) {
  std::string s = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) s = f + "(" + xs[i] + ", " + s + ")";
  return s;
}

struct Level {
  std::size_t var;
  std::vector<std::string> lo, hi;
};

struct Nest {
  std::vector<Level> levels;
  std::vector<std::string> guards;
};

// Bounds for the variables names[first..] given the earlier ones.
Nest make_nest(std::vector<Constraint> cons, const std::vector<std::string>& names,
               std::size_t first, const std::string& pname) {
  Nest n;
  std::vector<Level> rev;
  for (std::size_t k = names.size(); k-- > first;) {
    Level lv{k, {}, {}};
    for (const auto& c0 : cons) {
      Constraint c = c0;
      if (c.coeffs[k] == 0) continue;
      const bool eq = c.equality;
      if (eq && c.coeffs[k] < 0) {
        for (auto& x : c.coeffs) x = -x;
        c.param = -c.param;
        c.constant = -c.constant;
      }
      const Int a = c.coeffs[k];
      IntVector rest = c.coeffs;
      rest[k] = 0;
      if (a > 0) {
        // x >= ceil(-rest / a)
        IntVector neg;
        for (const auto& v : rest) neg.push_back(-v);
        std::string t = int_text(neg, names, -c.param, pname, -c.constant);
        lv.lo.push_back(a == 1 ? t : "ceild(" + t + ", " + a.get_str() + ")");
        if (eq) lv.hi.push_back(a == 1 ? t : "floord(" + t + ", " + a.get_str() + ")");
      } else {
        std::string t = int_text(rest, names, c.param, pname, c.constant);
        const Int b = -a;
        lv.hi.push_back(b == 1 ? t : "floord(" + t + ", " + b.get_str() + ")");
      }
    }
    if (lv.lo.empty() || lv.hi.empty())
      throw UnsupportedInput("emit: unbounded loop over " + names[k]);
    std::sort(lv.lo.begin(), lv.lo.end());
    lv.lo.erase(std::unique(lv.lo.begin(), lv.lo.end()), lv.lo.end());
    std::sort(lv.hi.begin(), lv.hi.end());
    lv.hi.erase(std::unique(lv.hi.begin(), lv.hi.end()), lv.hi.end());
    rev.push_back(std::move(lv));
    cons = fm_eliminate(cons, k);
  }
  n.levels.assign(rev.rbegin(), rev.rend());
  for (const auto& c : cons) {
    if (c.trivially_true()) continue;
    n.guards.push_back(int_text(c.coeffs, names, c.param, pname, c.constant) +
                       (c.equality ? " == 0" : " >= 0"));
  }
  return n;
}

class Out {
 public:
  void line(const std::string& s) { os_ << std::string(2 * ind_, ' ') << s << "\n"; }
  void open(const std::string& s) {
    line(s.empty() ? "{" : s + " {");
    ++ind_;
  }
  void close(const std::string& tail = "") {
    --ind_;
    line("}" + tail);
  }
  void reopen(const std::string& s) {
    --ind_;
    line(s);
    ++ind_;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  int ind_ = 1;
};

struct Array {
  std::string name;
  std::size_t dim = 0;
};

struct Scope {
  std::string prefix;
  std::string param;
  std::vector<std::string> ctx;  // enclosing context variables
  std::map<std::string, Array> arrays;
  std::function<std::string(const std::string&, const std::vector<std::string>&)> external;
};

std::set<std::string> deps_of(const Expr& e) {
  std::set<std::string> out;
  std::function<void(const Expr&)> go = [&](const Expr& x) {
    if (x.kind == ExprKind::Ref) out.insert(x.var);
    if ((x.kind == ExprKind::Reduce || x.kind == ExprKind::Input) && x.reduction)
      out.insert(x.reduction->source);
    if (x.kind == ExprKind::Family) out.insert(x.family->family.source);
    if (x.kind == ExprKind::Fractal) out.insert(x.fractal->triangle.source);
    for (const auto& a : x.args) go(*a);
  };
  go(e);
  return out;
}

std::vector<const Equation*> dependence_order(const EquationProgram& p) {
  std::vector<const Equation*> order;
  std::set<std::string> done, active;
  std::function<void(const Equation&)> visit = [&](const Equation& eq) {
    if (done.count(eq.var) || active.count(eq.var)) return;
    active.insert(eq.var);
    for (const auto& b : eq.branches)
      for (const auto& d : deps_of(*b.expr))
        if (d != eq.var)
          if (const Equation* q = p.find(d)) visit(*q);
    active.erase(eq.var);
    done.insert(eq.var);
    order.push_back(&eq);
  };
  for (const auto& eq : p.equations) visit(eq);
  return order;
}

// Offset of the self reference, if the branch is a recurrence.
std::optional<RatVector> recurrence_step(const Expr& e, const std::string& var) {
  if (e.kind == ExprKind::Ref && e.var == var) {
    const std::size_t n = e.index.out_dim();
    if (e.index.matrix == RatMatrix::identity(n) && is_zero(e.index.param_col))
      return scaled(e.index.const_col, -1);
  }
  for (const auto& a : e.args)
    if (auto d = recurrence_step(*a, var)) return d;
  return std::nullopt;
}

class Emitter {
 public:
  explicit Emitter(const EquationProgram& p) : top_(p) {}

  std::string run(const EmitOptions& o) {
    Scope sc;
    sc.param = p_name();
    sc.external = [this](const std::string& v, const std::vector<std::string>& idx) {
      inputs_[v] = idx.size();
      return sanitize(v) + "_at(" + join(idx) + ")";
    };
    Out body;
    emit_program(top_, sc, body);
    const Array& out = sc.arrays.at(top_.output);

    std::ostringstream os;
    os << "/* generated by redsimp */\n";
    if (!o.plan.empty()) {
      os << "/* plan:\n";
      std::istringstream in(o.plan);
      for (std::string l; std::getline(in, l);) os << " *   " << l << "\n";
      os << " */\n";
    }
    os << "#include <limits.h>\n#include <stdlib.h>\n\n";
    os << "typedef long long value_t;\n\n";
    os << "static long floord(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }\n";
    os << "static long ceild(long a, long b) { return -floord(-a, b); }\n";
    os << "#define MAX(a, b) ((a) > (b) ? (a) : (b))\n";
    os << "#define MIN(a, b) ((a) < (b) ? (a) : (b))\n";
    const Operator& op = top_.equations.front().op;
    switch (op.kind) {
      case OpKind::Sum:
        os << "#define ID 0\n#define OP(a, b) ((a) + (b))\n#define INV(a, b) ((a) - (b))\n";
        break;
      case OpKind::Product:
        os << "#define ID 1\n#define OP(a, b) ((a) * (b))\n#define INV(a, b) ((a) / (b))\n";
        break;
      case OpKind::Max:
        os << "#define ID LLONG_MIN\n#define OP(a, b) MAX(a, b)\n";
        break;
      case OpKind::Min:
        os << "#define ID LLONG_MAX\n#define OP(a, b) MIN(a, b)\n";
        break;
    }
    os << "\nstatic value_t *alloc_fill(long n) {\n"
          "  value_t *a = malloc(sizeof(value_t) * (n > 0 ? n : 1));\n"
          "  for (long k = 0; k < n; ++k) a[k] = ID;\n"
          "  return a;\n}\n\n";
    for (const auto& [name, arity] : inputs_) {
      std::vector<std::string> ps(arity, "long");
      os << "value_t " << sanitize(name) << "_at(" << (arity ? join(ps) : "void") << ");\n";
    }
    os << "\n";
    std::set<std::string> seen;
    for (const auto& g : globals_)
      if (seen.insert(g).second) os << g << "\n";
    os << "\n" << helpers_.str();
    os << "/* result in " << out.name << " */\n";
    os << "void " << sanitize(o.function) << "(long " << p_name() << ") {\n";
    os << body.str() << "}\n";
    return os.str();
  }

 private:
  std::string p_name() const { return top_.param_name.empty() ? "N" : top_.param_name; }

  static std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
    return s;
  }

  std::string fresh(const std::string& stem) { return stem + std::to_string(counter_++); }

  // Global array with bounds taken from `dom`.
  Array declare(const std::string& name, const Polyhedron& dom, const std::string& pname,
                Out& o) {
    Array a{name, dom.dim()};
    std::string size = "1";
    for (std::size_t k = 0; k < a.dim; ++k) {
      Polyhedron pr = project(dom, AffineMap::select(dom.dim(), {k}));
      Nest n = make_nest(pr.constraints(), {"x"}, 0, pname);
      globals_.push_back("static long " + name + "_lo" + std::to_string(k) + ", " + name + "_n" +
                         std::to_string(k) + ";");
      const std::string lo = nested("MAX", n.levels[0].lo), hi = nested("MIN", n.levels[0].hi);
      o.line(name + "_lo" + std::to_string(k) + " = " + lo + ";");
      o.line(name + "_n" + std::to_string(k) + " = MAX(0, " + hi + " - " + name + "_lo" +
             std::to_string(k) + " + 1);");
      size += " * " + name + "_n" + std::to_string(k);
    }
    globals_.push_back("static value_t *" + name + ";");
    o.line(name + " = alloc_fill(" + size + ");");
    return a;
  }

  static std::string at(const Array& a, const std::vector<std::string>& idx) {
    if (a.dim == 0) return a.name + "[0]";
    std::string off;
    for (std::size_t k = 0; k < a.dim; ++k) {
      std::string t = "((" + idx[k] + ") - " + a.name + "_lo" + std::to_string(k) + ")";
      off = k == 0 ? t : "(" + off + ") * " + a.name + "_n" + std::to_string(k) + " + " + t;
    }
    return a.name + "[" + off + "]";
  }

  std::string read(const Scope& sc, const std::string& var, const std::vector<std::string>& idx) {
    auto it = sc.arrays.find(var);
    if (it != sc.arrays.end()) return at(it->second, idx);
    return sc.external(var, idx);
  }

  // Opens one loop per level; returns the number of braces opened.
  int open_nest(const Nest& n, const std::vector<std::string>& names,
                const std::vector<bool>& down, Out& o) {
    int opened = 0;
    for (const auto& lv : n.levels) {
      const std::string v = names[lv.var];
      const std::string lo = nested("MAX", lv.lo), hi = nested("MIN", lv.hi);
      if (down.size() > lv.var && down[lv.var])
        o.open("for (long " + v + " = " + hi + "; " + v + " >= " + lo + "; --" + v + ")");
      else
        o.open("for (long " + v + " = " + lo + "; " + v + " <= " + hi + "; ++" + v + ")");
      ++opened;
    }
    if (!n.guards.empty()) {
      std::string g;
      for (const auto& s : n.guards) g += (g.empty() ? "" : " && ") + ("(" + s + ")");
      o.open("if (" + g + ")");
      ++opened;
    }
    return opened;
  }

  void close_n(int k, Out& o) {
    while (k-- > 0) o.close();
  }

  // Fold of a reduction at answer p into a fresh temporary.
  std::string emit_fold(const Reduction& r, const std::vector<std::string>& p, Scope& sc,
                        Out& o) {
    const std::string t = fresh("t");
    o.line("value_t " + t + " = ID;");
    const std::size_t m = p.size(), d = r.d();
    std::vector<std::string> names = p;
    std::vector<std::string> zs;
    for (std::size_t k = 0; k < d; ++k) zs.push_back(fresh("z"));
    names.insert(names.end(), zs.begin(), zs.end());
    std::vector<Constraint> cons;
    for (const auto& c : r.body.constraints()) {
      IntVector co(m, 0);
      co.insert(co.end(), c.coeffs.begin(), c.coeffs.end());
      cons.emplace_back(co, c.param, c.constant, c.equality);
    }
    for (std::size_t k = 0; k < m; ++k) {
      RatVector lin(m + d);
      lin[k] = 1;
      for (std::size_t c = 0; c < d; ++c) lin[m + c] = -r.write.matrix.at(k, c);
      cons.push_back(Constraint::from_rational(lin, -r.write.param_col[k],
                                               -r.write.const_col[k], true));
    }
    Nest n = make_nest(cons, names, m, sc.param);
    o.open("");
    const int k = open_nest(n, names, {}, o);
    o.line(t + " = OP(" + t + ", " + read(sc, r.source, apply_map(r.read, zs, sc.param)) + ");");
    close_n(k, o);
    o.close();
    return t;
  }

  std::string value(const Expr& e, const std::vector<std::string>& p, Scope& sc, Out& o,
                    const std::map<const Expr*, Array>& hoisted) {
    switch (e.kind) {
      case ExprKind::Reduce:
      case ExprKind::Input:
        return emit_fold(*e.reduction, p, sc, o);
      case ExprKind::Ref:
        return read(sc, e.var, apply_map(e.index, p, sc.param));
      case ExprKind::Combine: {
        std::vector<std::string> xs;
        for (const auto& a : e.args) xs.push_back(value(*a, p, sc, o, hoisted));
        return nested("OP", xs);
      }
      case ExprKind::InverseCombine: {
        std::string s = value(*e.args[0], p, sc, o, hoisted);
        for (std::size_t k = 1; k < e.args.size(); ++k)
          s = "INV(" + s + ", " + value(*e.args[k], p, sc, o, hoisted) + ")";
        return s;
      }
      case ExprKind::Fractal:
      case ExprKind::Family:
        return at(hoisted.at(&e), p);
    }
    return "ID";
  }

  void collect_hoisted(const Expr& e, std::vector<const Expr*>& out) {
    if (e.kind == ExprKind::Fractal || e.kind == ExprKind::Family) {
      out.push_back(&e);
      return;
    }
    for (const auto& a : e.args) collect_hoisted(*a, out);
  }

  void emit_program(const EquationProgram& p, Scope& sc, Out& o) {
    for (const auto& eq : p.equations)
      sc.arrays[eq.var] = Array{sc.prefix + sanitize(eq.var), eq.dim};
    for (const Equation* eq : dependence_order(p)) emit_equation(*eq, sc, o);
  }

  void emit_equation(const Equation& eq, Scope& sc, Out& o) {
    o.line("/* " + eq.var + " */");
    const Array arr = declare(sc.arrays.at(eq.var).name, eq.domain, sc.param, o);
    sc.arrays[eq.var] = arr;
    const auto names = answer_names(eq.dim);
    for (const auto& b : eq.branches) {
      std::vector<const Expr*> hs;
      collect_hoisted(*b.expr, hs);
      std::map<const Expr*, Array> hoisted;
      for (const Expr* h : hs) {
        if (h == b.expr.get()) {
          hoisted[h] = arr;
        } else {
          hoisted[h] = declare(fresh(sc.prefix + "h"), eq.domain, sc.param, o);
        }
        if (h->kind == ExprKind::Fractal)
          call_fractal(*h->fractal, hoisted[h], sc, o);
        else
          emit_family(*h->family, hoisted[h], sc, o);
      }
      if (hoisted.count(b.expr.get())) continue;

      std::vector<bool> down(eq.dim, false);
      auto step = recurrence_step(*b.expr, eq.var);
      if (step) {
        for (std::size_t k = 0; k < eq.dim; ++k) down[k] = (*step)[k] < 0;
        if (eq.dim == 1)
          o.line((*step)[0] > 0 ? "/* forward scan */" : "/* backward scan */");
        else
          o.line("/* scan along " + to_string(*step) + " */");
      }
      Nest n = make_nest(b.guard.constraints(), names, 0, sc.param);
      const int k = open_nest(n, names, down, o);
      const std::string v = value(*b.expr, names, sc, o, hoisted);
      o.line(at(arr, names) + " = " + v + ";");
      close_n(k, o);
    }
  }

  std::vector<std::string> answer_names(std::size_t dim) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < dim; ++k) out.push_back(fresh("p"));
    return out;
  }

  void emit_family(const FamilyNode& fam, const Array& target, Scope& sc, Out& o) {
    const IndependentFamily& f = fam.family;
    const std::size_t nc = f.context_dim;
    const std::string id = std::to_string(family_count_++);
    o.line("/* family_" + id + ": " + f.describe() + " */");
    std::vector<std::string> cs;
    for (std::size_t k = 0; k < nc; ++k) cs.push_back("c" + id + "_" + std::to_string(k));
    Nest n = make_nest(f.context.constraints(), cs, 0, sc.param);
    o.open("");
    const int k = open_nest(n, cs, {}, o);
    const std::string s = "s" + id;
    globals_.push_back("static long " + s + ";");
    o.line(s + " = " + apply_map(f.s_of_context, cs, sc.param)[0] + ";");
    o.open("if (" + s + " >= " + std::to_string(fam.member.param_lb) + ")");

    Scope inner;
    inner.prefix = "f" + id + "_";
    inner.param = s;
    inner.ctx = sc.ctx;
    inner.ctx.insert(inner.ctx.end(), cs.begin(), cs.end());
    Scope* outer = &sc;
    const std::string src = f.source;
    const AffineMap embed = f.input_embed;
    const std::string pname = sc.param;
    inner.external = [this, outer, cs, src, embed, pname](const std::string& v,
                                                          const std::vector<std::string>& idx) {
      if (v != "X") throw InvariantViolation("family member reads " + v);
      std::vector<std::string> cv = cs;
      cv.insert(cv.end(), idx.begin(), idx.end());
      return read(*outer, src, apply_map(embed, cv, pname));
    };
    // Globals outlive the scope; helper functions see the context through
    // their own parameters.
    globals_.push_back("static long " + join_decl(cs) + ";");
    emit_program(fam.member, inner, o);

    // Copy the member answers back: p = answer_to_member^-1 (c, u).
    const Equation* out = fam.member.find(fam.member.output);
    const auto us = answer_names(out->dim);
    Nest un = make_nest(out->domain.constraints(), us, 0, s);
    const int ku = open_nest(un, us, {}, o);
    std::vector<std::string> cu = cs;
    cu.insert(cu.end(), us.begin(), us.end());
    o.line(at(target, inverse_apply(f.answer_to_member, cu, sc.param)) + " = " +
           at(inner.arrays.at(fam.member.output), us) + ";");
    close_n(ku, o);
    for (const auto& [v, a] : inner.arrays) o.line("free(" + a.name + ");");
    o.close();
    close_n(k, o);
    o.close();
  }

  static std::string join_decl(const std::vector<std::string>& xs) {
    return xs.empty() ? "redsimp_unused_" : join(xs);
  }

  // Index expressions of p with map(p) = y.
  static std::vector<std::string> inverse_apply(const AffineMap& m,
                                                const std::vector<std::string>& y,
                                                const std::string& pname) {
    const std::size_t n = m.out_dim();
    RatMatrix inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      auto col = solve_linear(m.matrix, unit_vector(n, c));
      if (!col) throw InvariantViolation("emit: singular member map");
      for (std::size_t r = 0; r < n; ++r) inv.at(r, c) = (*col)[r];
    }
    // p = inv y - inv (param_col N + const_col)
    RatVector pc = scaled(inv.apply(m.param_col), -1), cc = scaled(inv.apply(m.const_col), -1);
    return apply_map(AffineMap(inv, pc, cc), y, pname);
  }

  void call_fractal(const FractalNode& f, const Array& target, Scope& sc, Out& o) {
    auto it = fractal_ids_.find(&f);
    if (it == fractal_ids_.end()) {
      it = fractal_ids_.emplace(&f, fractal_ids_.size()).first;
      define_fractal(f, it->second, sc);
    }
    const std::string fn = "fractal_" + std::to_string(it->second);
    std::vector<std::string> args{sc.param, p_name()};
    args.insert(args.end(), sc.ctx.begin(), sc.ctx.end());
    args.push_back(target.name);
    args.push_back(target.name + "_lo0");
    o.line(fn + "(" + join(args) + ");");
  }

  void define_fractal(const FractalNode& f, std::size_t id, const Scope& sc) {
    const std::string fn = "fractal_" + std::to_string(id);
    const std::string pre = "fr" + std::to_string(id) + "_";
    Out b;
    std::vector<std::string> params{"long s", "long " + p_name()};
    for (const auto& c : sc.ctx) params.push_back("long " + c);
    params.push_back("value_t *out");
    params.push_back("long out_lo0");

    Scope in;
    in.prefix = pre;
    in.param = "s";
    in.ctx = sc.ctx;
    in.external = sc.external;
    in.arrays = sc.arrays;
    // The fractal's own output, indexed by the answer u.
    const Array outa{"out", 1};

    const auto us = answer_names(1);
    Nest an = make_nest(f.answers.constraints(), us, 0, "s");
    b.open("if (s < " + std::to_string(f.threshold) + ")");
    b.line("/* threshold base case: direct fold over the triangle */");
    {
      const int k = open_nest(an, us, {}, b);
      const std::string t = value(*f.whole, us, in, b, {});
      b.line(at(outa, us) + " = OP(" + at(outa, us) + ", " + t + ");");
      close_n(k, b);
    }
    b.line("return;");
    b.close();
    b.line("/* level: the triangle minus the sub-triangle " +
           f.alpha_cut.complement().str({"u", "v"}) + " */");
    emit_program(f.level, in, b);
    {
      Nest ln = make_nest(f.level.find(f.level.output)->domain.constraints(), us, 0, "s");
      const int k = open_nest(ln, us, {}, b);
      b.line(at(outa, us) + " = OP(" + at(outa, us) + ", " +
             at(in.arrays.at(f.level.output), us) + ");");
      close_n(k, b);
    }
    for (const auto& eq : f.level.equations)
      b.line("free(" + in.arrays.at(eq.var).name + ");");

    Int g = 0;
    for (const auto& c : f.third_normal) g = gcd(g, c);
    if (g == 0) g = 1;
    const std::string gs = g.get_str(), lam = f.lambda.get_str(), mu = f.mu.get_str();
    b.line("/* sub-triangle: the same shape at s_sub (scale " + f.scale.get_str() + ") */");
    b.line("long k = floord(" + f.scale.get_num().get_str() + " * (" + lam + " * s + " + mu +
           ") - 1, " + f.scale.get_den().get_str() + ");");
    b.line("long kk = " + gs + " * floord(k, " + gs + ");");
    b.line("long s_sub = ceild(kk - " + mu + ", " + lam + ");");
    b.open("if (s_sub < s && " + gs + " * floord(" + lam + " * s_sub + " + mu + ", " + gs +
           ") == kk)");
    std::vector<std::string> rec{"s_sub", p_name()};
    rec.insert(rec.end(), sc.ctx.begin(), sc.ctx.end());
    rec.push_back("out");
    rec.push_back("out_lo0");
    b.line(fn + "(" + join(rec) + ");  /* recursion */");
    b.reopen("} else {");
    {
      Out& ob = b;
      ob.line("/* no integral sub-triangle: fold it directly */");
      const int k = open_nest(an, us, {}, ob);
      const std::string t = value(*f.sub, us, in, ob, {});
      ob.line(at(outa, us) + " = OP(" + at(outa, us) + ", " + t + ");");
      close_n(k, ob);
    }
    b.close();

    std::ostringstream h;
    h << "/* " << fn << ": " << f.describe() << " */\n";
    h << "static void " << fn << "(" << join(params) << ") {\n" << b.str() << "}\n\n";
    // Helpers emitted while defining this one come first.
    helpers_ << h.str();
  }

  const EquationProgram& top_;
  std::vector<std::string> globals_;
  std::ostringstream helpers_;
  std::map<std::string, std::size_t> inputs_;
  std::map<const FractalNode*, std::size_t> fractal_ids_;
  std::size_t family_count_ = 0;
  std::size_t counter_ = 0;
};

}  // namespace

std::string emit_c(const EquationProgram& p, const EmitOptions& o) {
  if (p.equations.empty()) throw InvariantViolation("emit: empty program");
  return Emitter(p).run(o);
}

}  // namespace redsimp
