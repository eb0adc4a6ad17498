// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "redsimp/classify.hpp"
#include "redsimp/dsl.hpp"
#include "redsimp/engine.hpp"
#include "redsimp/interp.hpp"

namespace redsimp {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct VerifyRow {
  long n = 0;
  bool match = false;
  std::size_t answers = 0;
  std::uint64_t ops_raw = 0;
  std::uint64_t ops_simplified = 0;
  std::uint64_t inverses = 0;
};

struct Verification {
  std::uint64_t seed = 1;
  std::vector<VerifyRow> rows;
  bool all_match() const;
};

// Interprets p against the oracle at each n, with seeded inputs. A nonzero
// `skew` feeds the program different inputs than the oracle (fault injection).
Verification verify_program(const Reduction& r, const EquationProgram& p,
                            const std::vector<long>& ns, std::uint64_t seed,
                            std::uint64_t skew = 0);

struct PipelineOptions {
  bool verify = false;
  std::vector<long> ns{6, 9, 12};
  bool fit = false;
  std::vector<long> fit_ns{32, 64, 128, 256};
  std::uint64_t seed = 1;
  long fractal_threshold = 4;
  bool product_invertible = false;
  std::size_t max_depth = 64;
  std::uint64_t skew = 0;
};

struct FitSection {
  std::vector<long> ns;
  std::optional<DegreeFit> raw;  // skipped when the raw fold is too large
  DegreeFit simplified;
};

struct Timing {
  double simplify_ms = 0;
  double verify_ms = 0;
  double fit_ms = 0;
};

struct Report {
  ReductionSpec spec;
  Reduction reduction;
  SimplifyResult result;
  int degree_before = 0;
  int degree_after = 0;
  std::vector<FacetClass> facets;
  std::vector<Labeling> labelings;
  std::optional<Verification> verification;
  std::optional<FitSection> fit;
  Timing timing;
  long fractal_threshold = 4;
};

Report run_pipeline(const ReductionSpec& spec, const PipelineOptions& o);

nlohmann::ordered_json plan_json(const PlanNode& p);
nlohmann::ordered_json report_json(const Report& r);
// Columns n, ops_raw, ops_simplified.
std::string ops_csv(const Verification& v);

}  // namespace redsimp
