#pragma once

#include "polyval/subdivision.hpp"

#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <variant>

namespace polyval {

struct ExactComplex {
  Rational re, im;
  bool operator==(const ExactComplex& o) const { return re == o.re && im == o.im; }
};

// Complex value kept as a pair of rationals until a floating input forces doubles.
class MeasureValue {
 public:
  MeasureValue() : v_(ExactComplex{0, 0}) {}
  MeasureValue(Rational re, Rational im = 0) : v_(ExactComplex{std::move(re), std::move(im)}) {}
  MeasureValue(long re) : MeasureValue(Rational(re)) {}
  MeasureValue(int re) : MeasureValue(Rational(re)) {}
  MeasureValue(std::complex<double> z) : v_(z) {}
  static MeasureValue approx(double re, double im = 0) { return MeasureValue(std::complex<double>(re, im)); }

  bool exact() const { return std::holds_alternative<ExactComplex>(v_); }
  const ExactComplex& exact_value() const { return std::get<ExactComplex>(v_); }
  std::complex<double> value() const;

  MeasureValue operator+(const MeasureValue& o) const;
  MeasureValue operator-(const MeasureValue& o) const;
  MeasureValue operator-() const;
  MeasureValue operator*(const MeasureValue& o) const;
  MeasureValue& operator+=(const MeasureValue& o) { return *this = *this + o; }
  MeasureValue& operator-=(const MeasureValue& o) { return *this = *this - o; }
  // Exact equality when both are exact; bitwise double equality otherwise.
  bool operator==(const MeasureValue& o) const;
  bool near(const MeasureValue& o, double tol) const;

 private:
  std::variant<ExactComplex, std::complex<double>> v_;
};

using GeneratorTable = std::map<int, MeasureValue>;

struct AssumptionViolation : std::runtime_error {
  AssumptionViolation(const std::string& msg, int a, int b) : std::runtime_error(msg), cell_a(a), cell_b(b) {}
  int cell_a, cell_b;
};

class Measure {
 public:
  Measure(SubdivisionPtr d, GeneratorTable m);

  const Subdivision& subdivision() const { return *d_; }
  const SubdivisionPtr& subdivision_ptr() const { return d_; }
  const GeneratorTable& generators() const { return m_; }
  bool exact() const { return exact_; }

  // Value on the union of the cells in a down-closed set (memoized).
  MeasureValue value(const Bits& closure) const;

 private:
  SubdivisionPtr d_;
  GeneratorTable m_;
  bool exact_ = true;
  mutable std::mutex mu_;
  mutable std::map<Bits, MeasureValue> memo_;
};

// Certifies that cell intersections are unions of cells and that distinct cells
// of one type meet in lower type. Throws AssumptionViolation.
void check_assumptions(const Subdivision& d);

Measure extend(SubdivisionPtr d, GeneratorTable m, bool check = true);
MeasureValue evaluate(const Measure& mu, const ComplexSet& x);

// Inclusion-exclusion applied literally to the given presentation: the listed
// cells in the given order, no canonicalization at the top level.
MeasureValue evaluate_presentation(const Measure& mu, const std::vector<int>& cells);

// The same recursion with the maximal cells taken in a permuted order and a
// private cache.
MeasureValue evaluate_in_order(const Measure& mu, const ComplexSet& x, std::uint64_t seed);

// Weight of each relative-interior atom: m(l) = sum of weights of cells inside l.
std::vector<MeasureValue> atom_weights(const Measure& mu);

// Generators on a refinement that reproduce mu on the unions of coarse cells:
// the weight of each coarse atom is spread over the finer atoms inside it with
// signs (-1)^(dim coarse - dim fine).
GeneratorTable induced_generators(const Measure& mu, const Subdivision& fine);

// Fine cells contained in the union (used to carry a coarse union to a refinement).
ComplexSet transport(const ComplexSet& x, SubdivisionPtr fine);

using PolytopeEvaluator = std::function<MeasureValue(const Polytope&)>;

struct LocalValuationCover {
  std::vector<Box> boxes;
  std::vector<PolytopeEvaluator> evaluators;
};

struct OverlapIncompatible : std::runtime_error {
  OverlapIncompatible(const std::string& msg, Polytope c, MeasureValue a, MeasureValue b)
      : std::runtime_error(msg), cell(std::move(c)), first(std::move(a)), second(std::move(b)) {}
  Polytope cell;
  MeasureValue first, second;
};

struct GlueOptions {
  PerturbOptions perturb;
  double tolerance = 1e-9;
  bool check = true;
};

MeasureValue glue(const LocalValuationCover& cover, const ComplexSet& x, const GlueOptions& opt = {});
MeasureValue glue(const LocalValuationCover& cover, const Polytope& p, const GlueOptions& opt = {});

}  // namespace polyval
