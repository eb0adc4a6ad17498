// SPDX-License-Identifier: Apache-2.0
#include "redsimp/interp.hpp"

#include <pthread.h>

#include <cmath>
#include <exception>

#include "redsimp/scanner.hpp"

namespace redsimp {

bool apply_integral(const AffineMap& m, const Index& z, long n, Index& out) {
  out.resize(m.out_dim());
  for (std::size_t r = 0; r < m.out_dim(); ++r) {
    Rational v = m.param_col[r] * n + m.const_col[r];
    for (std::size_t c = 0; c < m.in_dim(); ++c) {
      const Rational& a = m.matrix.at(r, c);
      if (sgn(a) != 0) v += a * z[c];
    }
    if (v.get_den() != 1) return false;
    out[r] = v.get_num().get_si();
  }
  return true;
}

Evaluator::Evaluator(const EquationProgram& p, long n, InputFn inputs, OpCounter* counter)
    : prog_(p), n_(n), inputs_(std::move(inputs)), counter_(counter) {}

Evaluator::~Evaluator() = default;

Value Evaluator::combine(const Operator& op, const Value& a, const Value& b) {
  if (!a.empty && !b.empty && counter_) ++counter_->ops;
  return op.apply(a, b);
}

Value Evaluator::read(const std::string& var, const Index& idx) {
  if (prog_.find(var)) return get(var, idx);
  return inputs_(var, idx);
}

Value Evaluator::get(const std::string& var, const Index& idx) {
  auto& table = memo_[var];
  auto it = table.find(idx);
  if (it != table.end()) return it->second;
  const Equation* eq = prog_.find(var);
  if (!eq) throw InvariantViolation("unknown variable " + var);
  auto key = std::make_pair(var, idx);
  if (!active_.insert(key).second)
    throw InvariantViolation("recurrence of " + var + " reads an unwritten value");
  Value v;
  for (const auto& b : eq->branches) {
    if (!b.guard.contains(idx, n_)) continue;
    v = eval(*b.expr, idx);
    break;
  }
  active_.erase(key);
  memo_[var][idx] = v;
  return v;
}

Value Evaluator::reduce_direct(const Expr& e, const Index& p, long n) {
  const Reduction& r = *e.reduction;
  Value acc;
  Index x;
  e.scanner().for_each(p, n, [&](const Index& z) {
    if (!apply_integral(r.read, z, n, x)) return;
    acc = combine(r.op, acc, read(r.source, x));
  });
  return acc;
}

Value Evaluator::eval(const Expr& e, const Index& p) {
  switch (e.kind) {
    case ExprKind::Ref: {
      Index idx;
      if (!apply_integral(e.index, p, n_, idx)) return Value::none();
      return read(e.var, idx);
    }
    case ExprKind::Input: {
      Index z, x;
      if (!apply_integral(e.index, p, n_, z)) return Value::none();
      if (!e.reduction->body.contains(z, n_)) return Value::none();
      if (!apply_integral(e.reduction->read, z, n_, x)) return Value::none();
      return read(e.reduction->source, x);
    }
    case ExprKind::Reduce:
      return reduce_direct(e, p, n_);
    case ExprKind::Combine: {
      Value acc;
      for (const auto& a : e.args) acc = combine(e.op, acc, eval(*a, p));
      return acc;
    }
    case ExprKind::InverseCombine: {
      Value acc = eval(*e.args[0], p);
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        Value x = eval(*e.args[i], p);
        if (x.empty) continue;
        if (counter_) ++counter_->inverses;
        acc = e.op.inverse(acc, x);
      }
      return acc;
    }
    case ExprKind::Fractal:
      return eval_fractal(e, p);
    case ExprKind::Family:
      return eval_family(e, p);
  }
  return Value::none();
}

Value Evaluator::eval_fractal(const Expr& e, const Index& p) {
  const FractalNode& f = *e.fractal;
  const Operator& op = f.triangle.op;
  Int g = 0;
  for (const auto& c : f.third_normal) g = gcd(g, c);
  if (g == 0) g = 1;
  const Int tp = f.scale.get_num(), tq = f.scale.get_den();
  Value acc;
  long s = n_;
  for (;;) {
    if (!f.answers.contains(p, s)) break;
    if (s < f.threshold) {
      acc = combine(op, acc, reduce_direct(*f.whole, p, s));
      break;
    }
    auto key = std::make_pair(static_cast<const void*>(&f), Index{s});
    auto it = children_.find(key);
    if (it == children_.end()) {
      auto ev = std::make_unique<Evaluator>(
          f.level, s, [this](const std::string& v, const Index& i) { return read(v, i); },
          counter_);
      it = children_.emplace(key, std::move(ev)).first;
    }
    acc = combine(op, acc, it->second->get(f.level.output, p));
    // The sub-triangle is {third_normal·z <= K'}, the same shape at s'.
    Int w = f.lambda * s + f.mu;
    Int k = floor_div(tp * w - 1, tq);
    Int kk = g * floor_div(k, g);
    Int s2 = ceil_div(kk - f.mu, f.lambda);
    bool ok = s2 < s && g * floor_div(f.lambda * s2 + f.mu, g) == kk;
    if (!ok) {
      acc = combine(op, acc, reduce_direct(*f.sub, p, s));
      break;
    }
    s = s2.get_si();
  }
  return acc;
}

Value Evaluator::eval_family(const Expr& e, const Index& p) {
  const FamilyNode& fam = *e.family;
  const IndependentFamily& f = fam.family;
  Index cu, sv;
  if (!apply_integral(f.answer_to_member, p, n_, cu)) return Value::none();
  const std::size_t nc = f.context_dim;
  Index c(cu.begin(), cu.begin() + nc), u(cu.begin() + nc, cu.end());
  if (!f.context.contains(c, n_)) return Value::none();
  if (!apply_integral(f.s_of_context, c, n_, sv)) return Value::none();
  const long s = sv[0];
  if (s < fam.member.param_lb) return Value::none();
  auto key = std::make_pair(static_cast<const void*>(&fam), c);
  auto it = children_.find(key);
  if (it == children_.end()) {
    auto ev = std::make_unique<Evaluator>(
        fam.member, s,
        [this, &f, c](const std::string& v, const Index& idx) {
          if (v != "X") throw InvariantViolation("family member reads " + v);
          Index cv = c, x;
          cv.insert(cv.end(), idx.begin(), idx.end());
          if (!apply_integral(f.input_embed, cv, n_, x)) return Value::none();
          return read(f.source, x);
        },
        counter_);
    it = children_.emplace(key, std::move(ev)).first;
  }
  return it->second->get(fam.member.output, u);
}

// ---------------------------------------------------------------- drivers

InputFn lcg_inputs(std::uint64_t seed, const Operator& op, long range) {
  return [seed, op, range](const std::string& name, const Index& idx) {
    std::uint64_t x = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto step = [&](std::uint64_t v) {
      x = (x ^ v) * 6364136223846793005ULL + 1442695040888963407ULL;
      x ^= x >> 29;
    };
    for (char ch : name) step(static_cast<unsigned char>(ch));
    for (long v : idx) step(static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL);
    step(0x51);
    long v = static_cast<long>((x >> 17) % static_cast<std::uint64_t>(range)) - range / 2;
    if (op.kind == OpKind::Product) {
      v = static_cast<long>((x >> 17) % 5) - 2;
      if (v == 0 || op.product_invertible) v = v == 0 ? 3 : v;
    }
    return Value::of(Rational(v));
  };
}

Answers oracle_evaluate(const Reduction& r, long n, const InputFn& inputs,
                        OpCounter* counter) {
  Answers out;
  Index p, x;
  for (const auto& z : integer_points(r.body, n)) {
    if (!apply_integral(r.write, z, n, p)) continue;
    if (!apply_integral(r.read, z, n, x)) continue;
    Value v = inputs(r.source, x);
    auto it = out.find(p);
    if (it == out.end()) {
      out.emplace(p, v);
      continue;
    }
    if (!it->second.empty && !v.empty && counter) ++counter->ops;
    it->second = r.op.apply(it->second, v);
  }
  return out;
}

Answers interpret(const EquationProgram& p, long n, const InputFn& inputs,
                  const std::vector<Index>& at, OpCounter* counter) {
  Answers out;
  std::exception_ptr err;
  run_with_big_stack([&] {
    try {
      Evaluator ev(p, n, inputs, counter);
      for (const auto& idx : at) out[idx] = ev.get(p.output, idx);
    } catch (...) {
      err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<Index> answer_candidates(const Reduction& r, long n) {
  return integer_points(project(r.body, r.write), n);
}

EquationProgram raw_program(const Reduction& r, const std::string& var) {
  EquationProgram p;
  Equation eq;
  eq.var = var;
  eq.dim = r.answer_dim();
  eq.op = r.op;
  eq.domain = project(r.body, r.write);
  eq.branches.push_back({eq.domain, make_reduce(r)});
  p.equations.push_back(eq);
  p.output = var;
  p.inputs[r.source] = r.read.out_dim();
  p.param_lb = r.param_lb();
  return p;
}

DegreeFit fit_degree(const std::vector<std::pair<long, std::uint64_t>>& counts) {
  DegreeFit fit;
  fit.counts = counts;
  const double k = static_cast<double>(counts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, c] : counts) {
    if (c == 0) throw UnsupportedInput("zero operation count at N = " + std::to_string(n));
    double x = std::log(static_cast<double>(n)), y = std::log(static_cast<double>(c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = k * sxx - sx * sx;
  fit.slope = den == 0 ? 0 : (k * sxy - sx * sy) / den;
  const double icpt = (sy - fit.slope * sx) / k;
  for (const auto& [n, c] : counts) {
    double e = std::log(static_cast<double>(c)) - (icpt + fit.slope * std::log(static_cast<double>(n)));
    fit.residual += e * e;
  }
  fit.residual = std::sqrt(fit.residual / k);
  return fit;
}

DegreeFit estimate_degree(const EquationProgram& p, const Reduction& r,
                          const std::vector<long>& ns, std::uint64_t seed) {
  if (ns.size() < 3) throw UnsupportedInput("degree fit needs at least 3 sizes");
  std::vector<std::pair<long, std::uint64_t>> counts;
  InputFn in = lcg_inputs(seed, r.op);
  for (long n : ns) {
    OpCounter c;
    interpret(p, n, in, answer_candidates(r, n), &c);
    counts.emplace_back(n, c.total());
  }
  return fit_degree(counts);
}

namespace {

void* trampoline(void* arg) {
  (*static_cast<const std::function<void()>*>(arg))();
  return nullptr;
}

}  // namespace

void run_with_big_stack(const std::function<void()>& f) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t(1) << 30);
  pthread_t th;
  if (pthread_create(&th, &attr, trampoline,
                     const_cast<std::function<void()>*>(&f)) != 0) {
    pthread_attr_destroy(&attr);
    f();
    return;
  }
  pthread_join(th, nullptr);
  pthread_attr_destroy(&attr);
}

}  // namespace redsimp
