// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracle.hpp"
#include "redsimp/classify.hpp"
#include "redsimp/report.hpp"

using namespace redsimp;
using namespace testing_helpers;

namespace {

const char* const kCorpus[] = {"prefix_sum", "prefix_max", "sliding_max",
                               "parallelogram", "tetra", "four_d"};

long target_degree(const Reduction& r) {
  return static_cast<long>(r.d()) - static_cast<long>(std::min(r.a(), r.r()));
}

}  // namespace

TEST(Engine, CorpusReachesTheTargetDegree) {
  for (const char* name : kCorpus) {
    Reduction r = corpus(name);
    auto res = simplify_max(r);
    EXPECT_EQ(cost_of(res.program), target_degree(r)) << name << "\n" << plan_string(*res.plan);
    EXPECT_EQ(res.plan->degree, target_degree(r)) << name;
    EXPECT_EQ(cost_of(raw_program(r)), static_cast<long>(r.d())) << name;
  }
}

TEST(Engine, CorpusProgramsMatchTheOracle) {
  for (const char* name : kCorpus) {
    Reduction r = corpus(name);
    auto res = simplify_max(r);
    for (long n : {1L, 2L, 5L, 8L}) {
      std::string why;
      EXPECT_TRUE(oracle::check_program(r, res.program, n, 11, nullptr, &why))
          << name << " N=" << n << ": " << why;
    }
  }
}

TEST(Engine, InverseOnlyWhereTheOperatorHasOne) {
  for (const char* name : kCorpus) {
    Reduction r = corpus(name);
    if (!r.op.has_inverse()) EXPECT_FALSE(contains_inverse(simplify_max(r).program)) << name;
  }
}

TEST(Engine, PlansOfTheCorpus) {
  auto plan = [](const char* n) { return simplify_max(corpus(n)).plan; };
  auto ps = plan("prefix_sum");
  EXPECT_EQ(ps->kind, PlanKind::Scan);
  auto pm = plan("prefix_max");
  ASSERT_EQ(pm->kind, PlanKind::Scan);
  EXPECT_EQ(*pm->rho, (IntVector{1, 0}));

  auto sm = plan("sliding_max");
  EXPECT_EQ(count_kind(*sm, PlanKind::Fractal), 1u);
  EXPECT_TRUE(has_split_on(*sm, Constraint({2, 0}, -1, 0, true)));
  EXPECT_TRUE(has_split_on(*sm, Constraint({0, 1}, -1, 0, true)));

  auto pg = plan("parallelogram");
  EXPECT_EQ(pg->kind, PlanKind::Split);
  EXPECT_TRUE(has_split_on(*pg, Constraint({1, 0}, -1, 0, true)));
  EXPECT_EQ(count_kind(*pg, PlanKind::Scan), 2u);

  auto te = plan("tetra");
  ASSERT_EQ(te->kind, PlanKind::Simplify);
  EXPECT_EQ(*te->rho, (IntVector{1, 0, 0}));

  auto fd = plan("four_d");
  EXPECT_EQ(fd->kind, PlanKind::Decompose);
  EXPECT_GE(count_kind(*fd, PlanKind::Simplify), 1u);
  EXPECT_GE(count_kind(*fd, PlanKind::Family), 1u);
  EXPECT_EQ(count_kind(*fd, PlanKind::Fractal), 2u);
}

TEST(Engine, NoAdmissibleLabelingForTheParallelogram) {
  Reduction r = corpus("parallelogram");
  auto fs = classify_facets(r);
  EXPECT_TRUE(admissible_labelings(r, enumerate_labelings(r), fs).empty());
}

TEST(Engine, Deterministic) {
  for (const char* name : kCorpus) {
    auto a = simplify_max(corpus(name)), b = simplify_max(corpus(name));
    EXPECT_EQ(plan_string(*a.plan), plan_string(*b.plan)) << name;
    EXPECT_EQ(a.program.str(), b.program.str()) << name;
  }
}

TEST(Engine, DepthLimitIsAnInvariantViolation) {
  EngineOptions o;
  o.max_depth = 0;
  EXPECT_THROW(simplify_max(corpus("four_d"), o), InvariantViolation);
}

TEST(Engine, ThresholdDoesNotChangeTheAnswers) {
  Reduction r = corpus("sliding_max");
  for (long t : {1L, 2L, 9L}) {
    EngineOptions o;
    o.fractal_threshold = t;
    auto res = simplify_max(r, o);
    for (long n : {7L, 30L}) {
      std::string why;
      EXPECT_TRUE(oracle::check_program(r, res.program, n, 2, nullptr, &why)) << t << " " << why;
    }
  }
}

TEST(Engine, OutputVariableName) {
  auto res = simplify_max(corpus("prefix_max"), {}, "Out");
  EXPECT_EQ(res.program.output, "Out");
  EXPECT_NE(res.program.find("Out"), nullptr);
}

TEST(Termination, SplitPiecesMustLoseResidualFacets) {
  Reduction r = corpus("parallelogram");
  EXPECT_THROW(assert_termination(r, {r}), InvariantViolation);
  auto [lo, hi] = split_by_hyperplane(r.body, Constraint({1, 0}, -1, 0, true));
  std::vector<Reduction> pieces;
  for (const auto& b : {lo, hi}) pieces.push_back(make_reduction(b, r.write, r.read, r.op));
  EXPECT_NO_THROW(assert_termination(r, pieces));
}

TEST(Plan, SerializeAndParse) {
  for (const char* name : kCorpus) {
    auto res = simplify_max(corpus(name));
    std::string text = serialize_plan(*res.plan);
    EXPECT_EQ(text.rfind("redsimp-plan v1\n", 0), 0u);
    PlanPtr back = parse_plan(text);
    EXPECT_EQ(plan_string(*back), plan_string(*res.plan)) << name;
    EXPECT_EQ(serialize_plan(*back), text);
  }
}

TEST(Plan, ParseErrors) {
  EXPECT_THROW(parse_plan(""), ParseError);
  EXPECT_THROW(parse_plan("redsimp-plan v2\n0\tScan\t1\t\n"), ParseError);
  EXPECT_THROW(parse_plan("redsimp-plan v1\n0\tBogus\t1\t\n"), ParseError);
  EXPECT_THROW(parse_plan("redsimp-plan v1\n0\tScan\t1\t\n2\tScan\t1\t\n"), ParseError);
  EXPECT_THROW(parse_plan("redsimp-plan v1\n0\tScan\tx\t\n"), ParseError);
  EXPECT_THROW(parse_plan("redsimp-plan v1\n"), ParseError);
}

TEST(Plan, KindNames) {
  for (PlanKind k : {PlanKind::Leaf, PlanKind::Scan, PlanKind::Simplify, PlanKind::Decompose,
                     PlanKind::Split, PlanKind::Fractal, PlanKind::Family})
    EXPECT_EQ(parse_plan_kind(to_string(k)), k);
  EXPECT_FALSE(parse_plan_kind("scan").has_value());
}

TEST(Engine, InverseCancellingToZeroOnAnEmptyFiber) {
  // The write image misses lattice points of its projection; the backward
  // recurrence leaves an exact 0 there, which is the sum identity.
  ReductionSpec s = parse_spec(
      "reduction q { param N >= 1; domain [i,j,k] : i - k >= 0 and -2i - j + 2k + 2N >= 0 and "
      "3i + j - 2k - 3N >= 0 and -2i + k + 2N >= 0; write [i,j,k] -> [i + j, -i + j]; "
      "read [i,j,k] -> [-i + j + k, j + k]; op sum; }");
  Reduction r = s.reduction();
  auto res = simplify_max(r);
  EXPECT_EQ(cost_of(res.program), 2);
  for (long n : {1L, 4L, 9L}) {
    std::string why;
    EXPECT_TRUE(oracle::check_program(r, res.program, n, 1, nullptr, &why)) << why;
  }
  EXPECT_TRUE(verify_program(r, res.program, {3, 9}, 1).all_match());
  Operator sum, prod, mx;
  prod.kind = OpKind::Product;
  mx.kind = OpKind::Max;
  EXPECT_TRUE(sum.is_identity(Value::of(0)));
  EXPECT_TRUE(prod.is_identity(Value::of(1)));
  EXPECT_FALSE(mx.is_identity(Value::of(0)));
  EXPECT_TRUE(mx.is_identity(Value::none()));
}
