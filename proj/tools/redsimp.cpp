// SPDX-License-Identifier: Apache-2.0
// redsimp: simplify polyhedral reductions.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "redsimp/classify.hpp"
#include "redsimp/dsl.hpp"
#include "redsimp/emit.hpp"
#include "redsimp/engine.hpp"
#include "redsimp/report.hpp"

using namespace redsimp;

namespace {

enum Exit { kOk = 0, kParse = 1, kUnsupported = 2, kMismatch = 3, kInternal = 4 };

struct Loaded {
  std::string path;
  std::string text;
};

// A path on disk, or the name of a bundled corpus file.
Loaded load(const std::string& path) {
  std::ifstream in(path);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return {path, ss.str()};
  }
  const std::string base = std::filesystem::path(path).filename().string();
  for (const auto& e : bundled_corpus())
    if (e.file == base || e.file == base + ".red") return {e.file, e.text};
  throw ParseError("cannot read " + path, 0, 0);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UnsupportedInput("cannot write " + path);
  out << text;
}

std::vector<long> parse_ns(const std::string& s) {
  std::vector<long> ns;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) throw ParseError("bad size list: " + s, 0, 0);
    ns.push_back(v);
  }
  if (ns.empty()) throw ParseError("empty size list", 0, 0);
  return ns;
}

struct Flags {
  std::string file;
  bool verify = false;
  std::string ns;
  std::string fit_ns;
  std::uint64_t seed = 1;
  bool dot = false;
  std::string emit_path;
  std::string report_path;
  std::string csv_path;
  long threshold = 4;
  bool threshold_set = false;
  bool product_invertible = false;
  std::size_t max_depth = 64;
  std::uint64_t skew = 0;
};

PipelineOptions pipeline_options(const Flags& f) {
  PipelineOptions o;
  o.verify = f.verify;
  if (!f.ns.empty()) o.ns = parse_ns(f.ns);
  if (!f.fit_ns.empty()) o.fit_ns = parse_ns(f.fit_ns);
  o.seed = f.seed;
  o.fractal_threshold = f.threshold;
  o.product_invertible = f.product_invertible;
  o.max_depth = f.max_depth;
  o.skew = f.skew;
  return o;
}

ReductionSpec load_spec(const Flags& f) {
  Loaded l = load(f.file);
  ReductionSpec s = parse_spec(l.text);
  if (f.threshold_set) s.fractal_threshold = f.threshold;
  return s;
}

void print_summary(const Report& rep, std::ostream& os) {
  const Reduction& r = rep.reduction;
  os << "reduction " << rep.spec.name << ": d=" << r.d() << " a=" << r.a() << " r=" << r.r()
     << " op=" << r.op.name() << "\n";
  os << "plan:\n" << plan_string(*rep.result.plan);
  os << "degree: " << rep.degree_before << " -> " << rep.degree_after << "\n";
  if (rep.verification) {
    const auto& v = *rep.verification;
    os << "verification (seed " << v.seed << "):\n";
    for (const auto& row : v.rows)
      os << "  N=" << row.n << " match=" << (row.match ? "true" : "false")
         << " ops_raw=" << row.ops_raw << " ops_simplified=" << row.ops_simplified
         << " inverses=" << row.inverses << "\n";
    os << "all matches: " << (v.all_match() ? "true" : "false") << "\n";
  }
  if (rep.fit) {
    os << "degree fit:";
    if (rep.fit->raw) os << " raw slope " << rep.fit->raw->slope << ",";
    os << " simplified slope " << rep.fit->simplified.slope << "\n";
  }
}

int finish(const Report& rep, const Flags& f) {
  print_summary(rep, std::cout);
  if (!f.report_path.empty()) write_file(f.report_path, report_json(rep).dump(2) + "\n");
  if (!f.csv_path.empty() && rep.verification) write_file(f.csv_path, ops_csv(*rep.verification));
  if (!f.emit_path.empty()) {
    EmitOptions eo;
    eo.function = rep.spec.name;
    eo.plan = plan_string(*rep.result.plan);
    write_file(f.emit_path, emit_c(rep.result.program, eo));
  }
  if (rep.verification && !rep.verification->all_match()) return kMismatch;
  return kOk;
}

int cmd_simplify(Flags f, bool fit) {
  PipelineOptions o = pipeline_options(f);
  o.fit = fit;
  if (fit) o.verify = true;
  return finish(run_pipeline(load_spec(f), o), f);
}

int cmd_lattice(const Flags& f) {
  ReductionSpec s = load_spec(f);
  Reduction r = s.reduction();
  FaceLattice lat = build_face_lattice(r.body);
  if (f.dot) {
    std::cout << lat.to_dot(s.name);
    return kOk;
  }
  const std::size_t d = r.body.affine_dim();
  for (std::size_t k = d + 1; k-- > 0;) {
    auto fs = lat.faces_of_dim(k);
    std::cout << "dim " << k << ": " << fs.size() << " face" << (fs.size() == 1 ? "" : "s")
              << "\n";
    for (std::size_t id : fs) std::cout << "  " << lat.faces[id].label() << "\n";
  }
  return kOk;
}

int cmd_labelings(const Flags& f) {
  ReductionSpec s = load_spec(f);
  Reduction r = s.reduction();
  auto facets = classify_facets(r);
  const auto names = s.indices.size() == r.d() ? s.indices : default_names(r.d());
  std::cout << "facets:\n";
  for (const auto& fc : facets)
    std::cout << "  " << fc.label << " " << r.body.constraints()[fc.constraint].str(names)
              << " boundary=" << to_string(fc.boundary) << " invariant=" << to_string(fc.invariant)
              << (fc.residual ? " residual" : "") << "\n";
  auto ls = enumerate_labelings(r);
  std::cout << "labelings: " << ls.size() << "\n";
  for (const auto& l : ls)
    std::cout << "  " << l.str() << (l.admissible_without_inverse ? " admissible" : "") << "\n";
  return kOk;
}

int cmd_emit(const Flags& f) {
  ReductionSpec s = load_spec(f);
  EngineOptions eo;
  eo.fractal_threshold = s.fractal_threshold.value_or(f.threshold);
  eo.max_depth = f.max_depth;
  if (f.product_invertible) s.product_invertible = true;
  SimplifyResult res = simplify_max(s.reduction(), eo, s.output);
  EmitOptions o;
  o.function = s.name;
  o.plan = plan_string(*res.plan);
  const std::string c = emit_c(res.program, o);
  if (f.emit_path.empty())
    std::cout << c;
  else
    write_file(f.emit_path, c);
  return kOk;
}

int cmd_corpus(const std::string& name, const std::string& dir, const Flags& f) {
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    for (const auto& e : bundled_corpus()) write_file(dir + "/" + e.file, e.text);
    std::cout << "wrote " << bundled_corpus().size() << " files to " << dir << "\n";
    return kOk;
  }
  if (!name.empty()) {
    std::cout << load(name).text;
    return kOk;
  }
  int rc = kOk;
  for (const auto& e : bundled_corpus()) {
    if (!f.verify) {
      std::cout << e.file << "\n";
      continue;
    }
    Flags g = f;
    g.file = e.file;
    Report rep = run_pipeline(load_spec(g), pipeline_options(g));
    std::cout << e.file << ": degree " << rep.degree_before << " -> " << rep.degree_after
              << ", all matches " << (rep.verification->all_match() ? "true" : "false") << "\n";
    if (!rep.verification->all_match()) rc = kMismatch;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redsimp: simplification of polyhedral reductions"};
  app.require_subcommand(1);
  Flags f;
  std::string corpus_name, corpus_dir;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", f.seed, "seed of the verification inputs");
    c->add_option("--fractal-threshold", f.threshold, "base-case size of fractal recursion")
        ->each([&](const std::string&) { f.threshold_set = true; });
    c->add_flag("--product-invertible", f.product_invertible,
                "allow division for product reductions");
    // Test hooks: a search depth limit and skewed verification inputs.
    c->add_option("--max-depth", f.max_depth)->group("");
    c->add_option("--skew-inputs", f.skew)->group("");
  };
  auto add_pipeline = [&](CLI::App* c) {
    c->add_option("file", f.file, ".red input (or a bundled corpus name)")->required();
    c->add_flag("--verify", f.verify, "compare against the brute-force oracle");
    c->add_option("--ns", f.ns, "comma separated sizes for verification");
    c->add_option("--fit-ns", f.fit_ns, "comma separated sizes for the degree fit");
    c->add_option("--emit-c", f.emit_path, "write C-like code to PATH");
    c->add_option("--report", f.report_path, "write the JSON report to PATH");
    c->add_option("--csv", f.csv_path, "write op counts (n, ops_raw, ops_simplified) to PATH");
    add_common(c);
  };

  auto* simplify = app.add_subcommand("simplify", "simplify a reduction and print the plan");
  add_pipeline(simplify);
  auto* verify = app.add_subcommand("verify", "simplify, verify and fit the degree");
  add_pipeline(verify);
  auto* lattice = app.add_subcommand("lattice", "print the face lattice of the domain");
  lattice->add_option("file", f.file)->required();
  lattice->add_flag("--dot", f.dot, "Graphviz output");
  auto* labelings = app.add_subcommand("labelings", "facet classes and labelings");
  labelings->add_option("file", f.file)->required();
  auto* emit = app.add_subcommand("emit-c", "emit C-like code for the simplified program");
  emit->add_option("file", f.file)->required();
  emit->add_option("--emit-c,-o", f.emit_path, "output path (default stdout)");
  add_common(emit);
  auto* corpus = app.add_subcommand("corpus", "list, print or check the bundled examples");
  corpus->add_option("name", corpus_name, "print one entry");
  corpus->add_option("--write", corpus_dir, "write all entries to DIR");
  corpus->add_flag("--verify", f.verify, "simplify and verify every entry");
  corpus->add_option("--ns", f.ns, "comma separated sizes for verification");
  add_common(corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (simplify->parsed()) return cmd_simplify(f, false);
    if (verify->parsed()) return cmd_simplify(f, true);
    if (lattice->parsed()) return cmd_lattice(f);
    if (labelings->parsed()) return cmd_labelings(f);
    if (emit->parsed()) return cmd_emit(f);
    if (corpus->parsed()) return cmd_corpus(corpus_name, corpus_dir, f);
  } catch (const ParseError& e) {
    std::cerr << f.file;
    if (e.line > 0) std::cerr << ":" << e.line << ":" << e.column;
    std::cerr << ": error: " << e.what() << "\n";
    return kParse;
  } catch (const UnsupportedInput& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return kUnsupported;
  } catch (const DimensionMismatch& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return kUnsupported;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
