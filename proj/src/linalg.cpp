#include "polyval/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace polyval {

using boost::multiprecision::mpz_int;

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec& a, const Rational& s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Vec neg(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

Vec zeros(int n) { return Vec(static_cast<std::size_t>(n), Rational(0)); }

Vec unit(int n, int i) {
  Vec v = zeros(n);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

bool is_zero(const Vec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<int> row_reduce(Mat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) { p = i; break; }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    Rational inv = 1 / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Rational f = m[i][c];
      for (int j = c; j < cols; ++j)
        if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(static_cast<std::size_t>(r));
  return pivots;
}

int rank(Mat m) { return static_cast<int>(row_reduce(m).size()); }

Mat nullspace(const Mat& rows, int cols) {
  Mat m = rows;
  auto piv = row_reduce(m);
  std::vector<bool> is_piv(static_cast<std::size_t>(cols), false);
  for (int p : piv) is_piv[p] = true;
  Mat basis;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    Vec v = zeros(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

Mat row_basis(const Mat& rows) {
  Mat m = rows;
  row_reduce(m);
  return m;
}

std::optional<Vec> solve_square(const Mat& a, const Vec& b) {
  const int n = static_cast<int>(a.size());
  Mat m(a.size());
  for (int i = 0; i < n; ++i) {
    m[i] = a[i];
    m[i].push_back(b[i]);
  }
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!m[i][c].is_zero()) { p = i; break; }
    if (p < 0) return std::nullopt;
    std::swap(m[c], m[p]);
    Rational inv = 1 / m[c][c];
    for (int j = c; j <= n; ++j) m[c][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || m[i][c].is_zero()) continue;
      Rational f = m[i][c];
      for (int j = c; j <= n; ++j)
        if (!m[c][j].is_zero()) m[i][j] -= f * m[c][j];
    }
  }
  Vec x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

std::optional<Vec> solve_any(const Mat& a, const Vec& b, int cols) {
  Mat m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    m[i] = a[i];
    m[i].push_back(b[i]);
  }
  auto piv = row_reduce(m);
  Vec x = zeros(cols);
  for (std::size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == cols) return std::nullopt;
    x[piv[i]] = m[i][cols];
  }
  return x;
}

Rational determinant(Mat m) {
  const int n = static_cast<int>(m.size());
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!m[i][c].is_zero()) { p = i; break; }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(m[c], m[p]);
      det = -det;
    }
    det *= m[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      Rational f = m[i][c] / m[c][c];
      for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

Vec project_onto(const Mat& basis, const Vec& v) {
  const int k = static_cast<int>(basis.size());
  if (k == 0) return zeros(static_cast<int>(v.size()));
  Mat g(k, Vec(k));
  Vec rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs[i] = dot(basis[i], v);
    for (int j = 0; j < k; ++j) g[i][j] = dot(basis[i], basis[j]);
  }
  auto c = solve_square(g, rhs);
  if (!c) throw std::invalid_argument("project_onto: dependent basis");
  Vec out = zeros(static_cast<int>(v.size()));
  for (int i = 0; i < k; ++i) out = add(out, scale(basis[i], (*c)[i]));
  return out;
}

Vec primitive(const Vec& v) {
  mpz_int l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, mpz_int(boost::multiprecision::denominator(x)));
  std::vector<mpz_int> ints;
  mpz_int g = 0;
  for (const auto& x : v) {
    mpz_int q = boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x));
    ints.push_back(q);
    g = boost::multiprecision::gcd(g, abs(q));
  }
  if (g == 0) return v;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
  return out;
}

}  // namespace polyval
