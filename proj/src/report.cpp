// SPDX-License-Identifier: Apache-2.0
#include "redsimp/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace redsimp {

using nlohmann::ordered_json;

bool Verification::all_match() const {
  for (const auto& r : rows)
    if (!r.match) return false;
  return !rows.empty();
}

Verification verify_program(const Reduction& r, const EquationProgram& p,
                            const std::vector<long>& ns, std::uint64_t seed,
                            std::uint64_t skew) {
  Verification v;
  v.seed = seed;
  const InputFn in = lcg_inputs(seed, r.op);
  const InputFn prog_in = skew ? lcg_inputs(seed + skew, r.op) : in;
  for (long n : ns) {
    if (n < r.param_lb())
      throw UnsupportedInput("N=" + std::to_string(n) + " is below the parameter bound");
    VerifyRow row;
    row.n = n;
    OpCounter raw, simp;
    Answers want = oracle_evaluate(r, n, in, &raw);
    Answers got = interpret(p, n, prog_in, answer_candidates(r, n), &simp);
    row.match = true;
    for (const auto& [idx, val] : want) {
      auto it = got.find(idx);
      if (it == got.end() || it->second != val) row.match = false;
    }
    // Outside the domain's answers only the identity may appear (an inverse
    // can cancel to 0 on an answer with an empty fiber).
    for (const auto& [idx, val] : got)
      if (!r.op.is_identity(val) && !want.count(idx)) row.match = false;
    row.answers = want.size();
    row.ops_raw = raw.total();
    row.ops_simplified = simp.total();
    row.inverses = simp.inverses;
    v.rows.push_back(row);
  }
  return v;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

DegreeFit raw_fit(const Reduction& r, const std::vector<long>& ns, std::uint64_t seed) {
  std::vector<std::pair<long, std::uint64_t>> counts;
  const InputFn in = lcg_inputs(seed, r.op);
  for (long n : ns) {
    OpCounter c;
    oracle_evaluate(r, n, in, &c);
    counts.emplace_back(n, c.total());
  }
  return fit_degree(counts);
}

ordered_json fit_json(const DegreeFit& f) {
  ordered_json j;
  j["slope"] = f.slope;
  j["residual"] = f.residual;
  ordered_json counts = ordered_json::array();
  for (const auto& [n, c] : f.counts) counts.push_back({{"n", n}, {"ops", c}});
  j["counts"] = counts;
  return j;
}

std::string map_text(const AffineMap& m, const std::vector<std::string>& names) {
  return m.str(names);
}

}  // namespace

Report run_pipeline(const ReductionSpec& spec_in, const PipelineOptions& o) {
  Report rep;
  rep.spec = spec_in;
  if (o.product_invertible) rep.spec.product_invertible = true;
  rep.fractal_threshold = rep.spec.fractal_threshold.value_or(o.fractal_threshold);
  if (rep.fractal_threshold < 1) throw UnsupportedInput("fractal threshold must be positive");
  rep.reduction = rep.spec.reduction();
  const Reduction& r = rep.reduction;

  rep.facets = classify_facets(r);
  rep.labelings = enumerate_labelings(r);

  auto t0 = std::chrono::steady_clock::now();
  EngineOptions eo;
  eo.fractal_threshold = rep.fractal_threshold;
  eo.max_depth = o.max_depth;
  rep.result = simplify_max(r, eo, rep.spec.output);
  rep.timing.simplify_ms = ms_since(t0);
  rep.degree_before = cost_of(raw_program(r, rep.spec.output));
  rep.degree_after = cost_of(rep.result.program);
  if (!r.op.has_inverse() && contains_inverse(rep.result.program))
    throw InvariantViolation("inverse used for an operator without one");

  if (o.verify) {
    t0 = std::chrono::steady_clock::now();
    rep.verification = verify_program(r, rep.result.program, o.ns, o.seed, o.skew);
    rep.timing.verify_ms = ms_since(t0);
  }
  if (o.fit) {
    t0 = std::chrono::steady_clock::now();
    FitSection f;
    f.ns = o.fit_ns;
    f.simplified = estimate_degree(rep.result.program, r, o.fit_ns, o.seed);
    long top = 0;
    for (long n : o.fit_ns) top = std::max(top, n);
    if (std::pow(static_cast<double>(top), static_cast<double>(r.d())) <= 2e8)
      f.raw = raw_fit(r, o.fit_ns, o.seed);
    rep.fit = f;
    rep.timing.fit_ms = ms_since(t0);
  }
  return rep;
}

ordered_json plan_json(const PlanNode& p) {
  ordered_json j;
  j["kind"] = to_string(p.kind);
  j["detail"] = p.detail;
  j["degree"] = p.degree;
  if (p.cut) j["cut"] = p.cut->with_equality(true).str(default_names(p.cut->dim()));
  if (p.rho) {
    ordered_json rho = ordered_json::array();
    for (const auto& x : *p.rho) rho.push_back(to_long(x));
    j["rho"] = rho;
  }
  ordered_json kids = ordered_json::array();
  for (const auto& c : p.children) kids.push_back(plan_json(*c));
  j["children"] = kids;
  return j;
}

ordered_json report_json(const Report& rep) {
  const Reduction& r = rep.reduction;
  const ReductionSpec& s = rep.spec;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "redsimp";

  ordered_json in;
  in["name"] = s.name;
  in["param"] = s.param;
  in["param_lower_bound"] = s.param_lb;
  in["indices"] = s.indices;
  std::vector<std::string> dom;
  for (const auto& c : s.domain) dom.push_back(c.str(s.indices));
  in["domain"] = dom;
  in["write"] = map_text(s.write, s.indices);
  in["read"] = map_text(s.read, s.indices);
  in["op"] = r.op.name();
  in["product_invertible"] = s.product_invertible;
  in["d"] = r.d();
  in["a"] = r.a();
  in["r"] = r.r();
  in["text"] = pretty_print(s);
  j["input"] = in;

  ordered_json deg;
  deg["before"] = rep.degree_before;
  deg["after"] = rep.degree_after;
  deg["target"] = static_cast<long>(r.d()) - static_cast<long>(std::min(r.a(), r.r()));
  j["degrees"] = deg;

  ordered_json plan;
  plan["format"] = "redsimp-plan v1";
  plan["text"] = plan_string(*rep.result.plan);
  plan["tree"] = plan_json(*rep.result.plan);
  j["plan"] = plan;
  j["program"] = rep.result.program.str();

  ordered_json facets = ordered_json::array();
  for (const auto& f : rep.facets) {
    ordered_json x;
    x["label"] = f.label;
    x["constraint"] = r.body.constraints()[f.constraint].str(s.indices.size() == r.d()
                                                                 ? s.indices
                                                                 : default_names(r.d()));
    x["boundary"] = to_string(f.boundary);
    x["invariant"] = to_string(f.invariant);
    x["residual"] = f.residual;
    facets.push_back(x);
  }
  j["facets"] = facets;

  ordered_json labs = ordered_json::array();
  for (const auto& l : rep.labelings) {
    ordered_json x;
    std::vector<std::string> signs;
    for (int v : l.signs) signs.push_back(v > 0 ? "+" : v < 0 ? "-" : "0");
    x["signs"] = signs;
    ordered_json w = ordered_json::array();
    for (const auto& c : l.witness) w.push_back(to_long(c));
    x["witness"] = w;
    x["admissible_without_inverse"] = l.admissible_without_inverse;
    labs.push_back(x);
  }
  ordered_json lt;
  lt["facets"] = [&] {
    std::vector<std::string> ls;
    for (const auto& f : rep.facets) ls.push_back(f.label);
    return ls;
  }();
  lt["rows"] = labs;
  j["labelings"] = lt;

  if (rep.verification) {
    const Verification& v = *rep.verification;
    ordered_json x;
    x["seed"] = v.seed;
    ordered_json rows = ordered_json::array();
    for (const auto& row : v.rows) {
      ordered_json y;
      y["n"] = row.n;
      y["match"] = row.match;
      y["answers"] = row.answers;
      y["ops_raw"] = row.ops_raw;
      y["ops_simplified"] = row.ops_simplified;
      y["inverses"] = row.inverses;
      rows.push_back(y);
    }
    x["results"] = rows;
    x["all_match"] = v.all_match();
    j["verification"] = x;
  }
  if (rep.fit) {
    ordered_json x;
    x["ns"] = rep.fit->ns;
    x["raw"] = rep.fit->raw ? fit_json(*rep.fit->raw) : ordered_json(nullptr);
    x["simplified"] = fit_json(rep.fit->simplified);
    j["degree_fit"] = x;
  }

  ordered_json t;
  t["simplify_ms"] = rep.timing.simplify_ms;
  t["verify_ms"] = rep.timing.verify_ms;
  t["fit_ms"] = rep.timing.fit_ms;
  j["timing"] = t;
  return j;
}

std::string ops_csv(const Verification& v) {
  std::ostringstream os;
  os << "n,ops_raw,ops_simplified\n";
  for (const auto& r : v.rows) os << r.n << "," << r.ops_raw << "," << r.ops_simplified << "\n";
  return os.str();
}

}  // namespace redsimp
