#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

namespace polyval {

using Rational = boost::multiprecision::mpq_rational;
using Vec = std::vector<Rational>;

// Accepts "p/q", "p", or a finite decimal such as "-0.125".
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

double to_double(const Rational& r);
std::vector<double> to_double(const Vec& v);

// Nearest rational with denominator at most max_den (continued fractions).
Rational approximate(double x, long long max_den);

int sign(const Rational& r);

}  // namespace polyval
