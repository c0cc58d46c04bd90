#pragma once

#include "polyval/io.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace polyval {

// Random test data shared by the suite and the acceptance runner.
Polynomial random_polynomial(int nvars, int degree, std::mt19937_64& rng, int lo = 0, int hi = -1);
// Sum of a few random monomial terms of the given degree, each multiplied by factor.
DifferentialForm random_form(Ambient a, int n, int degree, std::mt19937_64& rng, const Polynomial& factor);
// CC n-form with polynomial coefficients in (x, xi) and a cubic fiber cutoff of radius 3/2.
DifferentialForm random_bump_form(int n, std::mt19937_64& rng);
// Translation-invariant CC n-form whose terms have horizontal degree >= level (and one term equal to it).
DifferentialForm random_level_form(int n, int level, std::mt19937_64& rng);

struct ConvergenceRow {
  int m = 0;
  double value = 0;
  double error = 0;
};

// "disk": regular m-gon inscribed in the unit circle; "ball": geodesic icosahedral
// polytope of frequency m inscribed in the unit sphere. Vertices are rational approximations.
std::vector<ConvergenceRow> convergence_experiment(const std::string& body, const std::vector<int>& m_list, int k);
double limit_intrinsic_volume(const std::string& body, int k);
Polytope approximating_polytope(const std::string& body, int m);
// Least-squares slope of -log(error) against log(m).
double empirical_order(const std::vector<ConvergenceRow>& rows);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct SuiteConfig {
  // "cube:n", "simplex:n", "hull:n:points:seed", "segment:n" or a polytope JSON file.
  std::vector<std::string> corpus;
  double tol = 1e-8;  // approximate tolerances are scaled by tol / 1e-8
  int quad_order = 16;
  std::uint64_t seed = 1;
  long steiner_samples = 200000;
  int repeats = 3;
  int threads = 0;  // 0: hardware concurrency
  std::string log_path;  // JSON-lines progress log (with runtimes)

  static SuiteConfig defaults();
  static SuiteConfig from_json(const Json& j);
};

struct FamilyResult {
  std::string name;
  bool exact = false;
  bool passed = true;
  long cases = 0;
  long failures = 0;
  double residual = 0;   // worst residual over cases
  double tolerance = 0;  // threshold applied to the residual
  std::vector<std::string> messages;
};

struct SuiteReport {
  std::vector<FamilyResult> families;
  std::vector<std::string> diagnostics;  // malformed corpus entries
  bool passed() const;
  Json to_json() const;
};

std::vector<std::string> suite_family_names();
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace polyval
