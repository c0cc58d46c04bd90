#include "polyval/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace polyval {

const std::vector<QuadraturePoint>& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::vector<QuadraturePoint>> cache;
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  std::vector<QuadraturePoint> rule;
  for (double z : boost::math::legendre_p_zeros<double>(order)) {
    double dp = boost::math::legendre_p_prime<double>(order, z);
    double w = 2 / ((1 - z * z) * dp * dp);
    rule.push_back({{(1 + z) / 2}, w / 2});
    if (z != 0) rule.push_back({{(1 - z) / 2}, w / 2});
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

const std::vector<QuadraturePoint>& simplex_rule(int k, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<QuadraturePoint>> cache;
  const auto& line = gauss_legendre(order);
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<QuadraturePoint> rule{{{}, 1.0}};
  for (int level = 0; level < k; ++level) {
    std::vector<QuadraturePoint> next;
    for (const auto& p : rule)
      for (const auto& g : line) next.push_back({[&] { auto s = p.s; s.push_back(g.s[0]); return s; }(), p.weight * g.weight});
    rule = std::move(next);
  }
  // Collapse [0,1]^k onto the simplex.
  for (auto& p : rule) {
    double rest = 1;
    for (int i = 0; i < k; ++i) {
      double u = p.s[i];
      p.s[i] = rest * u;
      p.weight *= rest;
      rest *= 1 - u;
    }
  }
  return cache.emplace(key, std::move(rule)).first->second;
}

std::complex<double> integrate_over(const Polytope& p, const std::function<std::complex<double>(const std::vector<double>&)>& f,
                                    const QuadratureRule& q) {
  const int k = p.dim();
  const int n = p.ambient_dim();
  std::complex<double> total = 0;
  for (const auto& simplex : p.simplices()) {
    std::vector<double> x0 = to_double(p.vertex(simplex[0]));
    std::vector<std::vector<double>> edges;
    for (int j = 1; j <= k; ++j) {
      auto v = to_double(p.vertex(simplex[j]));
      for (int i = 0; i < n; ++i) v[i] -= x0[i];
      edges.push_back(v);
    }
    Eigen::MatrixXd e(n, k);
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < n; ++i) e(i, a) = edges[a][i];
    double scale = k == 0 ? 1.0 : std::sqrt(std::abs((e.transpose() * e).determinant()));
    for (const auto& node : simplex_rule(k, q.order)) {
      std::vector<double> x = x0;
      for (int a = 0; a < k; ++a)
        for (int i = 0; i < n; ++i) x[i] += node.s[a] * edges[a][i];
      total += node.weight * scale * f(x);
    }
  }
  return total;
}

}  // namespace polyval
