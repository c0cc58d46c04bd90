#pragma once

#include "polyval/cycles.hpp"
#include "polyval/measure.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

namespace polyval {

// Multiple of Lebesgue measure; the coefficient is a function of x (n variables).
struct Density {
  Coefficient coef;
};

struct PairRepresentation {
  Density nu;
  DifferentialForm eta;  // N-space, degree n - 1
};

using Oracle = std::function<std::complex<double>(const Polytope&)>;

struct Valuation {
  int n = 0;
  std::optional<PairRepresentation> pair;
  std::optional<DifferentialForm> cc_form;  // CC-space, degree n
  Oracle oracle;
  std::optional<int> claimed_level;

  static Valuation from_pair(Density nu, DifferentialForm eta);
  static Valuation from_cc_form(DifferentialForm omega);
  static Valuation from_oracle(int n, Oracle f);
};

std::complex<double> integrate_density(const Density& nu, const Polytope& p, const QuadratureRule& q);

// CC-form representation if present, otherwise the pair, otherwise the oracle.
std::complex<double> eval(const Valuation& phi, const Polytope& p, const QuadratureRule& q = {});
// Glued through the measure engine with generators phi(cell).
std::complex<double> eval(const Valuation& phi, const ComplexSet& x, const QuadratureRule& q = {});
// |pair value - CC-form value|; requires both representations.
double representation_gap(const Valuation& phi, const Polytope& p, const QuadratureRule& q = {});

// nu(x) psi(xi) dx_1..dx_n + g(|xi|) d|xi| ^ pi^* eta with pi(x, xi) = (x, -xi / |xi|),
// where psi(0) = 1 and g integrates to 1 on (0, radius).
DifferentialForm pair_to_cc(const PairRepresentation& pair, const Rational& radius = 1);

// Sum over k-faces of k-volume times external angle.
double intrinsic_volume(const Polytope& p, int k);
// V_k as a pair valuation (density for k = n, Lipschitz-Killing form otherwise).
Valuation intrinsic_volume_valuation(int n, int k);

struct NotPolynomial : std::runtime_error {
  NotPolynomial(const std::string& msg, double r) : std::runtime_error(msg), residual(r) {}
  double residual;
};

struct McMullenFit {
  std::vector<std::complex<double>> coefficients;  // c_0..c_n
  double residual = 0;  // max |fit - sample|
  double scale = 0;     // max |sample|
};

std::vector<Rational> default_samples();
McMullenFit mcmullen_decompose(const Valuation& phi, const Polytope& k, const Vec& x,
                               const std::vector<Rational>& ts = default_samples(), const QuadratureRule& q = {},
                               double relative_tolerance = 1e-7);

struct Probe {
  Polytope body;
  Vec point;
};

struct FiltrationDegree {
  int degree = 0;
  bool zero = false;  // every fitted coefficient vanished
};

// Largest i with |c_0|, ..., |c_{i-1}| <= tol * scale on every probe.
FiltrationDegree filtration_degree(const Valuation& phi, const std::vector<Probe>& probes, double tol = 1e-8,
                                   const QuadratureRule& q = {});

struct VerdierCheck {
  std::complex<double> lhs, rhs;
  double residual = 0;
};

VerdierCheck verdier_identity_check(const Polytope& p, const DifferentialForm& omega, const QuadratureRule& q = {});

// CC-form of phi (converting a pair if necessary); throws for oracle-only valuations.
DifferentialForm cc_form_of(const Valuation& phi, const Rational& radius = 1);
Valuation euler_verdier(const Valuation& phi);
std::pair<Valuation, Valuation> eigen_split(const Valuation& phi);

double ball_volume(int j);
// sum_j ball_volume(j) eps^j V_{n-j}(P).
double steiner_volume(const Polytope& p, double eps);

struct SteinerEstimate {
  double value = 0;
  double std_error = 0;
};

SteinerEstimate steiner_monte_carlo(const Polytope& p, double eps, long samples, std::uint64_t seed);

}  // namespace polyval
