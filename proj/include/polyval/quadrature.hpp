#pragma once

#include "polyval/polytope.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace polyval {

struct QuadratureRule {
  int order = 16;  // Gauss-Legendre points per parameter direction
  double tolerance = 1e-8;
};

struct QuadraturePoint {
  std::vector<double> s;  // coordinates in the standard simplex (or [0,1] for a segment rule)
  double weight = 0;
};

// Gauss-Legendre on [0, 1].
const std::vector<QuadraturePoint>& gauss_legendre(int order);
// Collapsed tensor Gauss-Legendre on {s >= 0, sum s <= 1} in dimension k.
const std::vector<QuadraturePoint>& simplex_rule(int k, int order);

// Integral of f against dim(P)-dimensional Lebesgue measure on P.
std::complex<double> integrate_over(const Polytope& p, const std::function<std::complex<double>(const std::vector<double>&)>& f,
                                    const QuadratureRule& q);

}  // namespace polyval
