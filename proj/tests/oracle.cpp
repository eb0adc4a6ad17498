// SPDX-License-Identifier: Apache-2.0
#include "oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

long Affine::eval(const std::vector<long>& z, long N) const {
  long s = n * N + k;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * z[i];
  return s;
}

namespace {

long to_l(const mpz_class& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("oracle: coefficient too large");
  return v.get_si();
}

Affine from_row(const redsimp::RatVector& row, const mpq_class& p, const mpq_class& k) {
  Affine a;
  for (const auto& q : row) {
    if (q.get_den() != 1) throw std::invalid_argument("oracle: rational map");
    a.c.push_back(to_l(q.get_num()));
  }
  if (p.get_den() != 1 || k.get_den() != 1) throw std::invalid_argument("oracle: rational map");
  a.n = to_l(p.get_num());
  a.k = to_l(k.get_num());
  return a;
}

std::vector<Affine> from_map(const redsimp::AffineMap& m) {
  std::vector<Affine> out;
  for (std::size_t r = 0; r < m.out_dim(); ++r)
    out.push_back(from_row(m.matrix.row(r), m.param_col[r], m.const_col[r]));
  return out;
}

Problem build(std::size_t d, const std::vector<redsimp::Constraint>& cons,
              const redsimp::AffineMap& w, const redsimp::AffineMap& r, const std::string& op) {
  Problem p;
  p.d = d;
  for (const auto& c : cons) {
    Affine a;
    for (const auto& x : c.coeffs) a.c.push_back(to_l(x));
    a.n = to_l(c.param);
    a.k = to_l(c.constant);
    (c.equality ? p.eq : p.ge).push_back(a);
  }
  p.write = from_map(w);
  p.read = from_map(r);
  p.op = op;
  return p;
}

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

template <class F>
void scan(const Problem& p, long N, F&& f) {
  const long b = p.box * (N + 1);
  std::vector<long> z(p.d, -b);
  if (p.d == 0) {
    f(z);
    return;
  }
  for (;;) {
    bool ok = true;
    for (const auto& a : p.ge)
      if (a.eval(z, N) < 0) {
        ok = false;
        break;
      }
    if (ok)
      for (const auto& a : p.eq)
        if (a.eval(z, N) != 0) {
          ok = false;
          break;
        }
    if (ok) f(z);
    std::size_t i = 0;
    while (i < p.d && z[i] == b) z[i++] = -b;
    if (i == p.d) return;
    ++z[i];
  }
}

}  // namespace

Problem from_spec(const redsimp::ReductionSpec& s) {
  redsimp::Operator op;
  op.kind = s.op;
  return build(s.indices.size(), s.domain, s.write, s.read, op.name());
}

Problem from_reduction(const redsimp::Reduction& r) {
  return build(r.d(), r.body.constraints(), r.write, r.read, r.op.name());
}

Inputs hashed_inputs(std::uint64_t seed, const std::string& op) {
  return [seed, op](const std::vector<long>& idx) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
    for (long v : idx) h = mix(h ^ static_cast<std::uint64_t>(v + 1000003));
    if (op == "product") {
      static const long vals[] = {-3, -2, -1, 1, 2, 3};
      return mpq_class(vals[h % 6]);
    }
    return mpq_class(static_cast<long>(h % 1000) - 500);
  };
}

redsimp::InputFn as_input_fn(const Inputs& in) {
  return [in](const std::string&, const redsimp::Index& idx) {
    return redsimp::Value::of(in(idx));
  };
}

Result evaluate(const Problem& p, long N, const Inputs& in) {
  Result out;
  scan(p, N, [&](const std::vector<long>& z) {
    std::vector<long> w, x;
    for (const auto& a : p.write) w.push_back(a.eval(z, N));
    for (const auto& a : p.read) x.push_back(a.eval(z, N));
    const mpq_class v = in(x);
    auto it = out.find(w);
    if (it == out.end()) {
      out.emplace(w, v);
      return;
    }
    mpq_class& acc = it->second;
    if (p.op == "sum")
      acc += v;
    else if (p.op == "product")
      acc *= v;
    else if (p.op == "max")
      acc = std::max(acc, v);
    else if (p.op == "min")
      acc = std::min(acc, v);
    else
      throw std::invalid_argument("oracle: op " + p.op);
  });
  return out;
}

std::size_t count_points(const Problem& p, long N) {
  std::size_t k = 0;
  scan(p, N, [&](const std::vector<long>&) { ++k; });
  return k;
}

bool same(const Result& want, const redsimp::Answers& got, std::string* why,
          const std::string& op) {
  auto idx_str = [](const std::vector<long>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
  };
  for (const auto& [p, v] : want) {
    auto it = got.find(p);
    if (it == got.end() || it->second.empty || it->second.q != v) {
      if (why)
        *why = "at " + idx_str(p) + " want " + v.get_str() + " got " +
               (it == got.end() ? "nothing" : it->second.empty ? "identity" : it->second.q.get_str());
      return false;
    }
  }
  auto identity = [&](const redsimp::Value& v) {
    if (v.empty) return true;
    if (op == "sum") return v.q == 0;
    if (op == "product") return v.q == 1;
    return false;
  };
  for (const auto& [p, v] : got)
    if (!identity(v) && !want.count(p)) {
      if (why) *why = "unexpected value at " + idx_str(p);
      return false;
    }
  return true;
}

bool check_program(const redsimp::Reduction& r, const redsimp::EquationProgram& prog, long N,
                   std::uint64_t seed, redsimp::OpCounter* counter, std::string* why) {
  Problem p = from_reduction(r);
  Inputs in = hashed_inputs(seed, p.op);
  Result want = evaluate(p, N, in);
  // Indices to ask for: the oracle's answers plus a ring around them.
  std::vector<redsimp::Index> at;
  for (const auto& [idx, v] : want) at.push_back(idx);
  for (const auto& idx : redsimp::answer_candidates(r, N))
    if (!want.count(idx)) at.push_back(idx);
  redsimp::Answers got = redsimp::interpret(prog, N, as_input_fn(in), at, counter);
  return same(want, got, why, p.op);
}

}  // namespace oracle
