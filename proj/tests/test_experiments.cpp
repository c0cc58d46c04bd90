#include "polyval/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace polyval;

TEST(Convergence, DiskHalfPerimeter) {
  auto rows = convergence_experiment("disk", {8, 16, 32, 64}, 1);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_NEAR(r.value, r.m * std::sin(std::numbers::pi / r.m), 1e-8);
  EXPECT_LT(rows.back().error, 2e-3);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].error, rows[i - 1].error);
  EXPECT_GE(empirical_order(rows), 1.9);
}

TEST(Convergence, DiskEulerAndArea) {
  for (const auto& r : convergence_experiment("disk", {8, 16, 32, 64}, 0)) EXPECT_NEAR(r.value, 1.0, 1e-12);
  auto rows = convergence_experiment("disk", {8, 16, 32, 64}, 2);
  for (const auto& r : rows) EXPECT_NEAR(r.value, r.m / 2.0 * std::sin(2 * std::numbers::pi / r.m), 1e-8);
  EXPECT_NEAR(rows.back().error, std::numbers::pi - 32 * std::sin(std::numbers::pi / 32), 1e-8);
  EXPECT_GE(empirical_order(rows), 1.9);
}

TEST(Convergence, GeodesicBall) {
  auto rows = convergence_experiment("ball", {1, 2, 4}, 3);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].error, rows[i - 1].error);
  Polytope ico = approximating_polytope("ball", 1);
  EXPECT_EQ(ico.vertices().size(), 12u);
  EXPECT_EQ(ico.faces_of_dim(2).size(), 20u);
  // Regular icosahedron with circumradius 1.
  const double a = 4 / std::sqrt(10 + 2 * std::sqrt(5.0));
  EXPECT_NEAR(rows[0].value, 5.0 / 12 * (3 + std::sqrt(5.0)) * a * a * a, 1e-7);
  EXPECT_EQ(approximating_polytope("ball", 2).vertices().size(), 42u);
}

TEST(Convergence, Errors) {
  EXPECT_THROW(convergence_experiment("torus", {8}, 1), std::invalid_argument);
  EXPECT_THROW(convergence_experiment("disk", {16, 8}, 1), std::invalid_argument);
  EXPECT_THROW(convergence_experiment("disk", {8}, 3), std::invalid_argument);
  EXPECT_EQ(convergence_csv({{8, 1.5, 0.25}}), "m,value,error\n8,1.5,0.25\n");
}

namespace {

SuiteConfig small_config() {
  SuiteConfig c;
  c.corpus = {"segment:1", "cube:2", "hull:2:6:4", "simplex:3"};
  c.repeats = 1;
  c.steiner_samples = 100000;
  return c;
}

}  // namespace

TEST(Suite, SmallCorpusPassesAndIsDeterministic) {
  SuiteReport r = run_suite(small_config());
  EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
  EXPECT_GE(r.families.size(), 12u);
  EXPECT_EQ(r.families.size(), suite_family_names().size());
  EXPECT_EQ(run_suite(small_config()).to_json().dump(), r.to_json().dump());
}

TEST(Suite, ZeroToleranceFailsApproximateChecksOnly) {
  SuiteConfig c = small_config();
  c.corpus = {"cube:2"};
  c.tol = 0;
  SuiteReport r = run_suite(c);
  EXPECT_FALSE(r.passed());
  bool some_quadrature_failure = false;
  for (const auto& f : r.families) {
    if (f.exact) EXPECT_TRUE(f.passed) << f.name;
    if (f.name == "gauss_degree" || f.name == "stokes_closedness") some_quadrature_failure |= !f.passed;
  }
  EXPECT_TRUE(some_quadrature_failure);
}

TEST(Suite, EmptyAndMalformedCorpus) {
  SuiteConfig c;
  c.corpus.clear();
  SuiteReport r = run_suite(c);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.families.empty());
  c.corpus = {"cube:0", "hull:2:x:1", "/nonexistent.json"};
  r = run_suite(c);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.diagnostics.size(), 3u);
}

TEST(RandomForms, LevelAndShape) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n)
    for (int level = 0; level <= n; ++level) {
      DifferentialForm w = random_level_form(n, level, rng);
      EXPECT_EQ(form_filtration_level(w), level);
      EXPECT_EQ(w.degree, n);
    }
  DifferentialForm b = random_bump_form(2, rng);
  EXPECT_EQ(b.degree, 2);
  EXPECT_TRUE(b.fiber_radius.has_value());
}
