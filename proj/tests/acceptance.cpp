// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "oracle.hpp"
#include "redsimp/classify.hpp"
#include "redsimp/emit.hpp"
#include "redsimp/transforms.hpp"

using namespace redsimp;
using namespace testing_helpers;

namespace {

// Collects failed checks of one criterion.
struct Check {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

bool oracle_ok(Check& c, const Reduction& r, const EquationProgram& p, long n,
               const std::string& what, OpCounter* counter = nullptr) {
  std::string why;
  bool ok = oracle::check_program(r, p, n, 1, counter, &why);
  c(ok, what + " oracle N=" + std::to_string(n) + " " + why);
  return ok;
}

Labeling labeling_with(const Reduction& r, const IntVector& rho) {
  for (const auto& l : enumerate_labelings(r))
    if (l.witness == rho) return l;
  throw std::runtime_error("no labeling with witness " + to_string(to_rational(rho)));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << x;
  return os.str();
}

int sign_of(const Rational& q) { return q > 0 ? 1 : q < 0 ? -1 : 0; }

// ------------------------------------------------------------ criteria

std::string c1_lattice(Check& c) {
  FaceLattice lat = build_face_lattice(corpus("tetra").body);
  const auto f2 = lat.count_of_dim(2), f1 = lat.count_of_dim(1), f0 = lat.count_of_dim(0);
  c(f2 == 4 && f1 == 6 && f0 == 4, "face counts");
  return std::to_string(f2) + "/" + std::to_string(f1) + "/" + std::to_string(f0) + " faces";
}

std::string c2_labelings(Check& c) {
  const auto t = enumerate_labelings(corpus("tetra")).size();
  const auto m = enumerate_labelings(corpus("prefix_max")).size();
  const auto p = enumerate_labelings(corpus("parallelogram")).size();
  c(t == 12, "tetra");
  c(m == 2, "prefix_max");
  c(p == 2, "parallelogram");
  return "tetra " + std::to_string(t) + ", prefix_max " + std::to_string(m) +
         ", parallelogram " + std::to_string(p);
}

std::string c3_prefix_sum(Check& c) {
  Reduction r = corpus("prefix_sum");
  auto res = simplify_max(r);
  c(cost_of(res.program) == 1, "degree");
  for (const IntVector& rho : {IntVector{1, 0}, IntVector{-1, 0}}) {
    EquationProgram p = single_step_simplify(r, labeling_with(r, rho));
    c(cost_of(p) == 1, "single step degree");
    for (long n : {8L, 16L, 32L}) oracle_ok(c, r, p, n, "rho " + to_string(to_rational(rho)));
  }
  for (long n : {8L, 16L, 32L}) oracle_ok(c, r, res.program, n, "plan");
  const std::vector<long> ns{32, 64, 128, 256};
  auto simp = estimate_degree(res.program, r, ns);
  auto raw = estimate_degree(raw_program(r), r, ns);
  c(simp.slope >= 0.8 && simp.slope <= 1.2, "simplified slope " + fmt(simp.slope));
  c(raw.slope >= 1.8 && raw.slope <= 2.2, "raw slope " + fmt(raw.slope));
  return "slope " + fmt(simp.slope) + " (raw " + fmt(raw.slope) + ")";
}

std::string c4_prefix_max(Check& c) {
  Reduction r = corpus("prefix_max");
  auto res = simplify_max(r);
  std::uint64_t inverses = 0;
  for (long n : {8L, 16L, 32L}) {
    OpCounter k;
    oracle_ok(c, r, res.program, n, "plan", &k);
    inverses += k.inverses;
  }
  c(inverses == 0 && !contains_inverse(res.program), "inverse operations");
  return std::to_string(inverses) + " inverses";
}

std::string c5_parallelogram(Check& c) {
  Reduction r = corpus("parallelogram");
  auto fs = classify_facets(r);
  const auto adm = admissible_labelings(r, enumerate_labelings(r), fs).size();
  c(adm == 0, "admissible labelings");
  auto res = simplify_max(r);
  c(has_split_on(*res.plan, Constraint({1, 0}, -1, 0, true)), "split i = N");
  c(cost_of(res.program) == 1, "degree");
  for (long n : {8L, 16L}) oracle_ok(c, r, res.program, n, "plan");
  return std::to_string(adm) + " admissible, degree " + std::to_string(cost_of(res.program));
}

std::string c6_sliding_max(Check& c) {
  Reduction r = corpus("sliding_max");
  auto res = simplify_max(r);
  c(has_split_on(*res.plan, Constraint({2, 0}, -1, 0, true)), "split 2i = N");
  c(has_split_on(*res.plan, Constraint({0, 1}, -1, 0, true)), "split j = N");
  c(count_kind(*res.plan, PlanKind::Fractal) >= 1, "fractal leaf");
  const std::string code = emit_c(res.program);
  const auto fn = code.find("static void fractal_");
  c(fn != std::string::npos, "fractal function");
  if (fn != std::string::npos) {
    c(code.find("/* backward scan */", fn) != std::string::npos, "backward scan");
    c(code.find("/* forward scan */", fn) != std::string::npos, "forward scan");
    c(code.find("/* recursion */", fn) != std::string::npos, "recursion");
    c(code.find("if (s < ", fn) != std::string::npos, "threshold base case");
  }
  for (long n : {8L, 16L, 64L, 257L}) oracle_ok(c, r, res.program, n, "plan");
  std::string ops;
  for (long n : {64L, 256L}) {
    OpCounter k;
    interpret(res.program, n, lcg_inputs(1, r.op), answer_candidates(r, n), &k);
    c(k.total() <= static_cast<std::uint64_t>(8 * n), "ops at N=" + std::to_string(n));
    ops += (ops.empty() ? "" : ", ") + std::to_string(k.total()) + " ops at N=" + std::to_string(n);
  }
  return ops;
}

std::string c7_tetra(Check& c) {
  Reduction r = corpus("tetra");
  EquationProgram step = single_step_simplify(r, labeling_with(r, {1, 0, 0}));
  // Y[i] = Y[i-1] + (fold over the face k = i - j)
  bool shape = false;
  for (const auto& b : step.find(step.output)->branches) {
    const Expr& e = *b.expr;
    if (e.kind != ExprKind::Combine || e.args.size() != 2) continue;
    const Expr& prev = *e.args[0];
    const Expr& sigma = *e.args[1];
    shape = prev.kind == ExprKind::Ref && prev.var == step.output && prev.index.const_col[0] == -1 &&
            prev.index.matrix.at(0, 0) == 1 && sigma.kind == ExprKind::Reduce &&
            sigma.reduction->body.affine_dim() == 2 &&
            sigma.reduction->body.contains(std::vector<long>{5, 2, 3}, 6) &&
            !sigma.reduction->body.contains(std::vector<long>{5, 2, 2}, 6);
  }
  c(shape, "single step structure");
  auto res = simplify_max(r);
  c(cost_of(res.program) == 1, "degree");
  for (long n : {4L, 8L}) oracle_ok(c, r, res.program, n, "plan");
  return "Y[i-1] + face fold, degree " + std::to_string(cost_of(res.program));
}

std::string c8_four_d(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Reduction r = corpus("four_d");
  auto res = simplify_max(r);
  c(cost_of(res.program) == 2, "degree");
  const PlanNode& p = *res.plan;
  c(count_kind(p, PlanKind::Decompose) >= 1, "decomposition");
  c(count_kind(p, PlanKind::Simplify) + count_kind(p, PlanKind::Scan) >= 1, "single step");
  c(count_kind(p, PlanKind::Family) >= 1, "family");
  c(count_kind(p, PlanKind::Fractal) == 2, "two fractal leaves");
  for (long n : {6L, 10L}) oracle_ok(c, r, res.program, n, "plan");
  auto fit = estimate_degree(res.program, r, {16, 24, 32, 48});
  c(fit.slope >= 1.7 && fit.slope <= 2.4, "slope " + fmt(fit.slope));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c(secs < 60, "time " + fmt(secs) + " s");
  return "slope " + fmt(fit.slope) + ", " + fmt(secs) + " s";
}

std::string c9_properties(Check& c) {
  std::mt19937_64 rng(2024);
  // (a)
  std::size_t a_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = trial % 2 ? 3 : 2;
    auto verts = random_simplex(rng, d, 3);
    Polyhedron body = scaled_simplex(verts);
    std::uniform_int_distribution<std::size_t> pick(0, d);
    std::size_t va = pick(rng), vb = pick(rng);
    while (vb == va) vb = pick(rng);
    Rational t(std::uniform_int_distribution<int>(1, 4)(rng), 5);
    auto [lo, hi] = split_by_hyperplane(body, cut_through_face(verts, va, vb, t));
    if (is_simplex(lo) && is_simplex(hi)) ++a_ok;
  }
  c(a_ok == 100, "(a) " + std::to_string(a_ok) + "/100 splits");
  // (b)
  std::size_t b_rows = 0, b_bad = 0;
  std::vector<Reduction> rs;
  for (const auto& e : bundled_corpus()) rs.push_back(parse_spec(e.text).reduction());
  for (int k = 0; k < 20; ++k) rs.push_back(random_reduction(rng, 2 + k % 2, OpKind::Max));
  for (const auto& r : rs) {
    if (r.r() == 0) continue;
    auto fs = classify_facets(r);
    for (const auto& l : enumerate_labelings(r)) {
      ++b_rows;
      for (std::size_t k = 0; k < fs.size(); ++k)
        if (sign_of(dot(fs[k].normal, to_rational(l.witness))) != l.signs[k]) ++b_bad;
    }
  }
  c(b_bad == 0 && b_rows > 0, "(b) witness signs");
  // (c)
  const OpKind ops[] = {OpKind::Max, OpKind::Min, OpKind::Sum};
  std::size_t c_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Reduction r = random_reduction(rng, 2 + trial % 2, ops[trial % 3]);
    const long n = std::uniform_int_distribution<long>(6, 12)(rng);
    try {
      auto res = simplify_max(r);
      std::string why;
      if (oracle::check_program(r, res.program, n, trial, nullptr, &why))
        ++c_ok;
      else
        c(false, "(c) " + r.str() + " N=" + std::to_string(n) + ": " + why);
    } catch (const std::exception& e) {
      c(false, std::string("(c) ") + e.what());
    }
  }
  c(c_ok == 50, "(c) " + std::to_string(c_ok) + "/50 random reductions");
  // (d) splits through a face where two residual facets meet, and every
  // split the engine accepts.
  std::size_t d_checked = 0, d_bad = 0;
  for (int k = 0; k < 40; ++k) rs.push_back(random_reduction(rng, 2 + k % 2, OpKind::Sum));
  for (const auto& r : rs) {
    const std::size_t before = residual_count(r);
    std::set<std::size_t> residual;
    for (const auto& f : classify_facets(r))
      if (f.residual) residual.insert(f.constraint);
    for (const auto& cand : spb_spi_candidates(r)) {
      bool both = cand.through_face.size() == 2;
      for (std::size_t f : cand.through_face) both = both && residual.count(f);
      if (!both) continue;
      auto [lo, hi] = split_by_hyperplane(r.body, cand.hyperplane);
      for (const auto& b : {lo, hi}) {
        ++d_checked;
        if (residual_count(make_reduction(b, r.write, r.read, r.op, r.source, false)) >= before) ++d_bad;
      }
    }
  }
  c(d_bad == 0 && d_checked > 0, "(d) residual counts");
  // Every split the engine takes passes assert_termination, or the run throws.
  std::size_t taken = 0;
  for (const auto& r : rs) {
    try {
      auto res = simplify_max(r);
      for_each_plan(*res.plan, [&](const PlanNode& p) {
        if (p.kind == PlanKind::Split &&
            (p.detail.rfind("SPB", 0) == 0 || p.detail.rfind("SPI", 0) == 0))
          ++taken;
      });
    } catch (const InvariantViolation& e) {
      c(false, std::string("(d) ") + e.what());
    }
  }
  c(taken > 0, "(d) no split taken");
  return "(a) " + std::to_string(a_ok) + "/100, (b) " + std::to_string(b_rows) + " labelings, (c) " +
         std::to_string(c_ok) + "/50, (d) " + std::to_string(d_checked) + " pieces, " +
         std::to_string(taken) + " splits taken";
}

std::string c10_degrees(Check& c) {
  std::string out;
  for (const auto& e : bundled_corpus()) {
    Reduction r = parse_spec(e.text).reduction();
    const long target = static_cast<long>(r.d()) - static_cast<long>(std::min(r.a(), r.r()));
    const long got = cost_of(simplify_max(r).program);
    c(got == target, e.file);
    out += (out.empty() ? "" : ", ") + e.file.substr(0, e.file.size() - 4) + " " +
           std::to_string(got);
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<std::string(Check&)> run;
    double limit_s;
  };
  const std::vector<Criterion> criteria{
      {"tetra face lattice 4/6/4", c1_lattice, 1},
      {"labeling counts 12/2/2", c2_labelings, 1},
      {"prefix sum", c3_prefix_sum, 5},
      {"prefix max without inverse", c4_prefix_max, 5},
      {"parallelogram split", c5_parallelogram, 5},
      {"sliding window max", c6_sliding_max, 10},
      {"tetra single step", c7_tetra, 10},
      {"four-index reduction", c8_four_d, 60},
      {"properties", c9_properties, 120},
      {"corpus degrees", c10_degrees, 120},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check c;
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run_with_big_stack([&] { detail = criteria[k].run(c); });
    } catch (const std::exception& e) {
      c(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c(secs < criteria[k].limit_s, "took " + fmt(secs) + " s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].name
              << " (" << detail << "; " << fmt(secs) << " s)\n";
    for (const auto& f : c.failures) std::cout << "    " << f << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
