#include "polyval/angles.hpp"

#include "polyval/cone.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace polyval {

namespace {

double ddot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double gram3(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
  double aa = ddot(a, a), bb = ddot(b, b), cc = ddot(c, c);
  double ab = ddot(a, b), ac = ddot(a, c), bc = ddot(b, c);
  return aa * (bb * cc - bc * bc) - ab * (ab * cc - bc * ac) + ac * (ab * bc - bb * ac);
}

}  // namespace

double solid_angle(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
  double la = std::sqrt(ddot(a, a)), lb = std::sqrt(ddot(b, b)), lc = std::sqrt(ddot(c, c));
  double triple = std::sqrt(std::max(0.0, gram3(a, b, c)));
  double denom = la * lb * lc + ddot(a, b) * lc + ddot(a, c) * lb + ddot(b, c) * la;
  return 2.0 * std::atan2(triple, denom);
}

AngleEstimate external_angle(const Polytope& p, int face_index, const AngleOptions& opt) {
  if (face_index < 0 || face_index >= static_cast<int>(p.faces().size()))
    throw std::invalid_argument("external_angle: face not in the lattice");
  const Face& f = p.face(face_index);
  const int m = p.dim() - f.dim;
  AngleEstimate out;
  if (m == 0) {
    out.value = 1;
    return out;
  }
  if (m == 1) {
    out.value = 0.5;
    return out;
  }
  Mat gens;
  for (int h : f.halfspaces) gens.push_back(project_onto(p.direction(), p.halfspaces()[h].normal));

  if (m == 2) {
    auto a = to_double(gens[0]);
    auto b = to_double(gens[1]);
    double cross = std::sqrt(std::max(0.0, to_double(dot(gens[0], gens[0]) * dot(gens[1], gens[1]) -
                                                      dot(gens[0], gens[1]) * dot(gens[0], gens[1]))));
    out.value = std::atan2(cross, ddot(a, b)) / (2 * std::numbers::pi);
    return out;
  }

  if (m == 3) {
    // Cross-section by the hyperplane <t, y> = 1 with t pointing from F into P.
    Vec xf = zeros(p.ambient_dim());
    for (int v : f.vertices) xf = add(xf, p.vertex(v));
    xf = scale(xf, Rational(1, static_cast<long>(f.vertices.size())));
    Vec t = sub(p.barycenter(), xf);
    std::vector<Vec> section;
    for (const auto& g : gens) section.push_back(scale(g, 1 / dot(g, t)));
    Polytope poly = Polytope::hull(section);
    double total = 0;
    for (const auto& s : poly.simplices())
      total += solid_angle(to_double(poly.vertex(s[0])), to_double(poly.vertex(s[1])), to_double(poly.vertex(s[2])));
    out.value = total / (4 * std::numbers::pi);
    return out;
  }

  // Sampled estimate inside span(gens).
  const int n = p.ambient_dim();
  std::vector<std::vector<double>> basis;
  for (const auto& g : gens) {
    auto v = to_double(g);
    for (const auto& e : basis) {
      double c = ddot(v, e);
      for (int i = 0; i < n; ++i) v[i] -= c * e[i];
    }
    double len = std::sqrt(ddot(v, v));
    if (len > 1e-9 * std::sqrt(ddot(to_double(g), to_double(g)))) {
      for (auto& x : v) x /= len;
      basis.push_back(v);
    }
    if (static_cast<int>(basis.size()) == m) break;
  }
  Mat span = gens;
  Mat complement = nullspace(span, n);
  Cone c = Cone::from_generators(n, gens, complement);
  std::vector<std::vector<double>> hs;
  for (const auto& a : c.halfspaces) hs.push_back(to_double(a));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  long hits = 0;
  std::vector<double> y(static_cast<std::size_t>(n));
  for (long s = 0; s < opt.samples; ++s) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int j = 0; j < m; ++j) {
      double z = gauss(rng);
      for (int i = 0; i < n; ++i) y[i] += z * basis[j][i];
    }
    bool in = true;
    for (const auto& a : hs)
      if (ddot(a, y) < 0) { in = false; break; }
    if (in) ++hits;
  }
  double ph = static_cast<double>(hits) / static_cast<double>(opt.samples);
  out.value = ph;
  out.std_error = std::sqrt(ph * (1 - ph) / static_cast<double>(opt.samples));
  out.sampled = true;
  return out;
}

double external_angle_value(const Polytope& p, int face_index) { return external_angle(p, face_index).value; }

}  // namespace polyval
