#include "polyval/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace polyval {

using boost::multiprecision::mpz_int;

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      Rational r(s);
      return r;
    }
    if (s.find('/') != std::string::npos || s.find_first_of("eE") != std::string::npos)
      throw std::invalid_argument("bad rational: " + text);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (digits == "-" || digits == "+" || digits.empty()) throw std::invalid_argument("bad rational: " + text);
    if (digits[0] == '+') digits = digits.substr(1);
    mpz_int num(digits);
    mpz_int den = boost::multiprecision::pow(mpz_int(10), static_cast<unsigned>(frac));
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational: " + text);
  }
}

std::string format_rational(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::vector<double> to_double(const Vec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

Rational approximate(double x, long long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("approximate: non-finite value");
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (std::fabs(a) > 9e15) break;
    long long ai = static_cast<long long>(a);
    long long q2 = ai * q1 + q0;
    if (q1 != 0 && q2 > max_den) break;
    long long p2 = ai * p1 + p0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return Rational(p1, q1);
}

int sign(const Rational& r) { return r.sign(); }

}  // namespace polyval
