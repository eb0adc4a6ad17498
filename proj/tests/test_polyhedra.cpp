// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "oracle.hpp"

using namespace redsimp;
using namespace testing_helpers;

namespace {

// 0 <= j <= i <= N
Polyhedron triangle() {
  return Polyhedron(2, {Constraint({0, 1}, 0, 0), Constraint({1, -1}, 0, 0), Constraint({-1, 0}, 1, 0)});
}

std::set<std::vector<long>> points(const Polyhedron& p, long n) {
  auto v = integer_points(p, n);
  return {v.begin(), v.end()};
}

}  // namespace

TEST(Polyhedron, MembershipAndEmptiness) {
  auto t = triangle();
  EXPECT_TRUE(t.contains(std::vector<long>{2, 1}, 3));
  EXPECT_FALSE(t.contains(std::vector<long>{1, 2}, 3));
  EXPECT_FALSE(t.is_empty());
  auto e = t.with(Constraint({1, 0}, -1, -1));  // i >= N + 1
  EXPECT_TRUE(e.is_empty());
  EXPECT_EQ(t.affine_dim(), 2u);
  EXPECT_EQ(t.asymptotic_degree(), 2);
}

TEST(Polyhedron, ImplicitEqualitiesArePromoted) {
  // i <= j and j <= i inside the triangle: the diagonal.
  auto d = triangle().with(Constraint({-1, 1}, 0, 0));
  EXPECT_EQ(d.affine_dim(), 1u);
  EXPECT_EQ(d.asymptotic_degree(), 1);
  EXPECT_EQ(count_points(d, 5), 6u);
}

TEST(Polyhedron, PointCountsMatchTheOracle) {
  for (const auto& e : bundled_corpus()) {
    ReductionSpec s = parse_spec(e.text);
    Reduction r = s.reduction();
    auto prob = oracle::from_spec(s);
    for (long n : {1L, 3L, 5L}) EXPECT_EQ(count_points(r.body, n), oracle::count_points(prob, n)) << e.file;
  }
}

TEST(Polyhedron, ParametricVerticesOfTheTriangle) {
  auto vs = enumerate_vertices(triangle());
  ASSERT_EQ(vs.size(), 3u);
  std::set<std::vector<long>> at5;
  for (const auto& v : vs) {
    auto q = v.at(5);
    at5.insert({q[0].get_num().get_si(), q[1].get_num().get_si()});
  }
  EXPECT_EQ(at5, (std::set<std::vector<long>>{{0, 0}, {5, 0}, {5, 5}}));
}

TEST(Lattice, TriangleHasThreeEdgesAndThreeVertices) {
  auto lat = build_face_lattice(triangle());
  EXPECT_EQ(lat.count_of_dim(2), 1u);
  EXPECT_EQ(lat.count_of_dim(1), 3u);
  EXPECT_EQ(lat.count_of_dim(0), 3u);
  EXPECT_TRUE(is_simplex(triangle()));
}

TEST(Lattice, TetrahedronFaceCounts) {
  auto r = corpus("tetra");
  auto lat = build_face_lattice(r.body);
  EXPECT_EQ(lat.count_of_dim(2), 4u);
  EXPECT_EQ(lat.count_of_dim(1), 6u);
  EXPECT_EQ(lat.count_of_dim(0), 4u);
  // Every edge lies on exactly two facets, every vertex on three.
  for (auto f : lat.faces_of_dim(1)) EXPECT_EQ(lat.faces[f].saturated.size(), 2u);
  for (auto f : lat.faces_of_dim(0)) EXPECT_EQ(lat.faces[f].saturated.size(), 3u);
  EXPECT_TRUE(is_simplex(r.body));
}

TEST(Lattice, ParallelogramIsNotASimplex) {
  auto r = corpus("parallelogram");
  auto lat = build_face_lattice(r.body);
  EXPECT_EQ(lat.count_of_dim(1), 4u);
  EXPECT_EQ(lat.count_of_dim(0), 4u);
  EXPECT_FALSE(is_simplex(r.body));
  auto tris = triangulate(r.body);
  ASSERT_EQ(tris.size(), 2u);
  std::size_t total = 0;
  for (const auto& t : tris) {
    EXPECT_TRUE(is_simplex(t));
    total += count_points(t, 6);
  }
  EXPECT_EQ(total, count_points(r.body, 6));
}

TEST(Lattice, DotUsesConstraintNumbers) {
  auto lat = build_face_lattice(corpus("tetra").body);
  std::string dot = lat.to_dot("tetra");
  for (const char* l : {"{1}", "{2}", "{3}", "{4}", "{1,2}"})
    EXPECT_NE(dot.find(std::string("label=\"") + l + "\""), std::string::npos) << l;
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(Projection, ImageOfTheTriangle) {
  auto img = project(triangle(), AffineMap::select(2, {0}));
  EXPECT_EQ(img.dim(), 1u);
  EXPECT_EQ(count_points(img, 7), 8u);
  EXPECT_TRUE(projection_is_exact(triangle(), AffineMap::select(2, {0})));
  // {0 <= 2j - i <= 1} projected on j is exact only over the integers it reaches.
  Polyhedron strip(2, {Constraint({-1, 2}, 0, 0), Constraint({1, -2}, 0, 1), Constraint({1, 0}, 0, 0),
                       Constraint({-1, 0}, 1, 0)});
  auto pj = project(strip, AffineMap::select(2, {1}));
  for (long n : {4L, 7L}) {
    std::set<long> want;
    for (const auto& z : integer_points(strip, n)) want.insert(z[1]);
    std::set<long> got;
    for (const auto& z : integer_points(pj, n)) got.insert(z[0]);
    EXPECT_EQ(want, got);
  }
}

TEST(SetDifference, PiecesAreDisjointAndCover) {
  auto a = triangle();
  auto b = Polyhedron(2, {Constraint({1, 0}, 0, -2), Constraint({-1, 0}, 0, 5), Constraint({0, 1}, 0, -1),
                          Constraint({0, -1}, 0, 3)});
  auto diff = set_difference(a, b);
  for (long n : {4L, 6L, 9L}) {
    std::set<std::vector<long>> got;
    std::size_t total = 0;
    for (const auto& p : diff.pieces) {
      auto pts = points(p, n);
      total += pts.size();
      got.insert(pts.begin(), pts.end());
    }
    EXPECT_EQ(total, got.size()) << "overlap at N=" << n;
    std::set<std::vector<long>> want;
    for (const auto& z : points(a, n))
      if (!b.contains(z, n)) want.insert(z);
    EXPECT_EQ(got, want);
  }
}

TEST(Split, HyperplaneSplitPartitionsPoints) {
  auto r = corpus("parallelogram");
  Constraint h({1, 0}, -1, 0, true);  // i = N
  auto [lo, hi] = split_by_hyperplane(r.body, h);
  for (long n : {3L, 8L}) EXPECT_EQ(count_points(lo, n) + count_points(hi, n), count_points(r.body, n));
  EXPECT_TRUE(is_simplex(lo));
  EXPECT_TRUE(is_simplex(hi));
}

TEST(Split, ScaledSimplexHelperBuildsTheRightSet) {
  auto p = scaled_simplex({{0, 0}, {1, 0}, {1, 1}});
  EXPECT_TRUE(is_simplex(p));
  for (long n : {2L, 5L}) EXPECT_EQ(count_points(p, n), count_points(triangle(), n));
}
