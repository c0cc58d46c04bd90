#pragma once

#include "polyval/rational.hpp"

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace polyval {

// CC: coordinates (x_1..x_n, xi_1..xi_n). N: (x_1..x_n, u_1..u_n) with u on the unit sphere.
enum class Ambient { CC, N };

class Polynomial {
 public:
  using Exponent = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  void add_term(const Exponent& e, const Rational& c);
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  // Largest total degree in the variables [lo, hi).
  int partial_degree(int lo, int hi) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial pow(int k) const;
  Polynomial derivative(int i) const;
  // y_i -> -y_i for i in [lo, hi).
  Polynomial reflect(int lo, int hi) const;
  // Reinterpret in a space with more variables (new variables appended).
  Polynomial extend(int nvars) const;

  double eval(const std::vector<double>& y) const;
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  struct Compiled {
    std::vector<double> coef;
    std::vector<int> exps;  // row-major, nvars per monomial
    std::vector<int> max_exp;
    std::vector<int> offset;  // start of each variable's power table
  };
  const Compiled& compiled() const;

  int nvars_ = 0;
  std::map<Exponent, Rational> terms_;
  mutable std::shared_ptr<const Compiled> compiled_;
};

using Callback = std::function<std::complex<double>(const std::vector<double>&)>;

class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(Polynomial p) : v_(std::move(p)) {}
  Coefficient(Callback f) : v_(std::move(f)) {}

  bool is_polynomial() const { return std::holds_alternative<Polynomial>(v_); }
  const Polynomial& polynomial() const { return std::get<Polynomial>(v_); }
  std::complex<double> operator()(const std::vector<double>& y) const;
  bool is_zero() const { return is_polynomial() && polynomial().is_zero(); }

 private:
  std::variant<Polynomial, Callback> v_;
};

// Differential indices 0..n-1 are dx_i, n..2n-1 are dxi_i (CC) or du_i (N).
struct FormTerm {
  Coefficient coef;
  std::vector<int> wedge;  // strictly increasing
  std::complex<double> scale = 1.0;
};

struct DifferentialForm {
  Ambient ambient = Ambient::CC;
  int n = 0;
  int degree = 0;
  std::vector<FormTerm> terms;
  // Working region on the base; the form is taken to be cut off smoothly outside it.
  std::optional<std::pair<Vec, Vec>> support_box;
  // CC only: coefficients are taken as zero for |xi| >= fiber_radius.
  std::optional<Rational> fiber_radius;

  int horizontal_degree(const FormTerm& t) const;
  bool is_polynomial() const;
  // Appends c * dy_{idx[0]} ^ ... after sorting; ignored if an index repeats.
  void add(Coefficient c, std::vector<int> idx, std::complex<double> scale = 1.0);
};

// Sorts in place and returns the permutation sign, or 0 if an index repeats.
int sort_wedge(std::vector<int>& idx);

DifferentialForm exterior_derivative(const DifferentialForm& w);
// (-1)^n times the pullback under xi -> -xi.
DifferentialForm euler_verdier(const DifferentialForm& w);
// Minimum horizontal degree over nonzero terms; n + 1 for the zero form;
// nullopt when a coefficient is a callback.
std::optional<int> form_filtration_level(const DifferentialForm& w);
DifferentialForm scaled(const DifferentialForm& w, std::complex<double> c);
DifferentialForm sum(const DifferentialForm& a, const DifferentialForm& b);

// (1 - |xi|^2 / R^2)^k in the 2n variables of CC-space.
Polynomial fiber_cutoff(int n, const Rational& radius, int k);

// Normalized Lipschitz-Killing form on N-space whose integral over N(P) is V_k(P), k < n.
DifferentialForm lipschitz_killing_form(int n, int k);

}  // namespace polyval
