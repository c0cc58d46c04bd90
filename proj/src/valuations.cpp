#include "polyval/valuations.hpp"

#include "polyval/angles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace polyval {

Valuation Valuation::from_pair(Density nu, DifferentialForm eta) {
  if (eta.ambient != Ambient::N || eta.degree != eta.n - 1)
    throw std::invalid_argument("valuation: pair needs an N-space form of degree n - 1");
  Valuation v;
  v.n = eta.n;
  v.pair = PairRepresentation{std::move(nu), std::move(eta)};
  return v;
}

Valuation Valuation::from_cc_form(DifferentialForm omega) {
  if (omega.ambient != Ambient::CC || omega.degree != omega.n)
    throw std::invalid_argument("valuation: CC-space form of degree n required");
  Valuation v;
  v.n = omega.n;
  v.cc_form = std::move(omega);
  return v;
}

Valuation Valuation::from_oracle(int n, Oracle f) {
  Valuation v;
  v.n = n;
  v.oracle = std::move(f);
  return v;
}

std::complex<double> integrate_density(const Density& nu, const Polytope& p, const QuadratureRule& q) {
  if (p.dim() < p.ambient_dim() || nu.coef.is_zero()) return 0;
  return integrate_over(p, [&](const std::vector<double>& x) { return nu.coef(x); }, q);
}

std::complex<double> eval(const Valuation& phi, const Polytope& p, const QuadratureRule& q) {
  if (p.ambient_dim() != phi.n) throw std::invalid_argument("eval: dimension mismatch");
  if (phi.cc_form) return integrate(characteristic_cycle(p), *phi.cc_form, q);
  if (phi.pair) return integrate_density(phi.pair->nu, p, q) + integrate(normal_cycle(p), phi.pair->eta, q);
  if (phi.oracle) return phi.oracle(p);
  throw std::invalid_argument("eval: valuation has no representation");
}

std::complex<double> eval(const Valuation& phi, const ComplexSet& x, const QuadratureRule& q) {
  const auto& d = x.subdivision_ptr();
  GeneratorTable m;
  for (int i = 0; i < d->size(); ++i) m[i] = MeasureValue(eval(phi, d->cell(i), q));
  return evaluate(extend(d, std::move(m)), x).value();
}

double representation_gap(const Valuation& phi, const Polytope& p, const QuadratureRule& q) {
  if (!phi.pair || !phi.cc_form) throw std::invalid_argument("representation_gap: both representations required");
  auto a = integrate_density(phi.pair->nu, p, q) + integrate(normal_cycle(p), phi.pair->eta, q);
  auto b = integrate(characteristic_cycle(p), *phi.cc_form, q);
  return std::abs(a - b);
}

DifferentialForm pair_to_cc(const PairRepresentation& pair, const Rational& radius) {
  const int n = pair.eta.n;
  DifferentialForm w;
  w.ambient = Ambient::CC;
  w.n = n;
  w.degree = n;
  w.support_box = pair.eta.support_box;
  w.fiber_radius = radius;
  std::vector<int> all_dx(n);
  for (int i = 0; i < n; ++i) all_dx[i] = i;
  Polynomial psi = fiber_cutoff(n, radius, 2);
  if (pair.nu.coef.is_polynomial()) {
    if (!pair.nu.coef.is_zero()) w.add(pair.nu.coef.polynomial().extend(2 * n) * psi, all_dx);
  } else {
    Coefficient nu = pair.nu.coef;
    w.add(Callback([nu, psi, n](const std::vector<double>& y) {
            return nu(std::vector<double>(y.begin(), y.begin() + n)) * psi.eval(y);
          }),
          all_dx);
  }
  const double big_r = to_double(radius);
  for (const auto& t : pair.eta.terms) {
    const int vertical = static_cast<int>(t.wedge.size()) - pair.eta.horizontal_degree(t);
    Coefficient c = t.coef;
    for (int k = 0; k < n; ++k) {
      Callback f = [c, k, n, vertical, big_r](const std::vector<double>& y) -> std::complex<double> {
        double r2 = 0;
        for (int i = n; i < 2 * n; ++i) r2 += y[i] * y[i];
        double r = std::sqrt(r2);
        if (r == 0 || r >= big_r) return 0.0;
        std::vector<double> z = y;
        for (int i = n; i < 2 * n; ++i) z[i] = -y[i] / r;
        double s = r / big_r;
        double g = 30 / big_r * s * s * (1 - s) * (1 - s);
        return g * (y[n + k] / r) * std::pow(-1 / r, vertical) * c(z);
      };
      std::vector<int> idx{n + k};
      idx.insert(idx.end(), t.wedge.begin(), t.wedge.end());
      w.add(std::move(f), std::move(idx), t.scale);
    }
  }
  return w;
}

double intrinsic_volume(const Polytope& p, int k) {
  if (k < 0 || k > p.ambient_dim()) throw std::invalid_argument("intrinsic_volume: k out of range");
  if (k > p.dim()) return 0;
  double s = 0;
  for (int f : p.faces_of_dim(k)) s += p.face_polytope(f).volume() * external_angle(p, f).value;
  return s;
}

Valuation intrinsic_volume_valuation(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("intrinsic_volume_valuation: k out of range");
  DifferentialForm eta;
  eta.ambient = Ambient::N;
  eta.n = n;
  eta.degree = n - 1;
  if (k == n) return Valuation::from_pair(Density{Polynomial::constant(n, 1)}, eta);
  return Valuation::from_pair(Density{Polynomial(n)}, lipschitz_killing_form(n, k));
}

std::vector<Rational> default_samples() {
  std::vector<Rational> ts;
  for (int i = 1; i <= 8; ++i) ts.emplace_back(i, 8);
  return ts;
}

McMullenFit mcmullen_decompose(const Valuation& phi, const Polytope& k, const Vec& x, const std::vector<Rational>& ts,
                               const QuadratureRule& q, double relative_tolerance) {
  const int n = phi.n;
  std::set<Rational> distinct(ts.begin(), ts.end());
  if (static_cast<int>(distinct.size()) < n + 1 || *distinct.begin() <= 0)
    throw std::invalid_argument("mcmullen_decompose: need n + 1 distinct positive samples");
  const int m = static_cast<int>(ts.size());
  Eigen::MatrixXcd a(m, n + 1);
  Eigen::VectorXcd b(m);
  McMullenFit fit;
  for (int i = 0; i < m; ++i) {
    double t = to_double(ts[i]);
    for (int j = 0; j <= n; ++j) a(i, j) = std::pow(t, j);
    b(i) = eval(phi, affine_image(k, ts[i], x), q);
    fit.scale = std::max(fit.scale, std::abs(b(i)));
  }
  Eigen::VectorXcd c = a.colPivHouseholderQr().solve(b);
  fit.residual = (a * c - b).cwiseAbs().maxCoeff();
  for (int j = 0; j <= n; ++j) fit.coefficients.push_back(c(j));
  if (fit.residual > relative_tolerance * std::max(fit.scale, 1e-300) && fit.residual > 0)
    throw NotPolynomial("mcmullen_decompose: samples are not a polynomial of degree <= n", fit.residual);
  return fit;
}

FiltrationDegree filtration_degree(const Valuation& phi, const std::vector<Probe>& probes, double tol,
                                   const QuadratureRule& q) {
  if (probes.empty()) throw std::invalid_argument("filtration_degree: no probes");
  const int n = phi.n;
  int degree = n + 1;
  for (const auto& probe : probes) {
    McMullenFit fit = mcmullen_decompose(phi, probe.body, probe.point, default_samples(), q);
    int i = 0;
    while (i <= n && std::abs(fit.coefficients[i]) <= tol * fit.scale) ++i;
    degree = std::min(degree, i);
  }
  FiltrationDegree r;
  r.zero = degree == n + 1;
  r.degree = std::min(degree, n);
  return r;
}

VerdierCheck verdier_identity_check(const Polytope& p, const DifferentialForm& omega, const QuadratureRule& q) {
  const int n = p.ambient_dim();
  DifferentialForm reflected = scaled(euler_verdier(omega), n % 2 ? -1.0 : 1.0);
  VerdierCheck r;
  r.lhs = integrate(characteristic_cycle(p), reflected, q);
  std::complex<double> boundary = 0;
  if (p.dim() > 0) {
    auto d = std::make_shared<const Subdivision>(face_subdivision(p));
    GeneratorTable m;
    std::vector<int> proper;
    for (int i = 0; i < d->size(); ++i) {
      const Polytope& cell = d->cell(i);
      m[i] = MeasureValue(integrate(characteristic_cycle(cell), omega, q));
      if (cell.dim() < p.dim()) proper.push_back(i);
    }
    boundary = evaluate(extend(d, std::move(m)), ComplexSet(d, proper)).value();
  }
  const double sign = (n - p.dim()) % 2 ? -1.0 : 1.0;
  r.rhs = sign * (integrate(characteristic_cycle(p), omega, q) - boundary);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

DifferentialForm cc_form_of(const Valuation& phi, const Rational& radius) {
  if (phi.cc_form) return *phi.cc_form;
  if (phi.pair) return pair_to_cc(*phi.pair, radius);
  throw std::invalid_argument("valuation has no form representation");
}

Valuation euler_verdier(const Valuation& phi) { return Valuation::from_cc_form(euler_verdier(cc_form_of(phi))); }

std::pair<Valuation, Valuation> eigen_split(const Valuation& phi) {
  DifferentialForm w = cc_form_of(phi);
  DifferentialForm s = euler_verdier(w);
  return {Valuation::from_cc_form(sum(scaled(w, 0.5), scaled(s, 0.5))),
          Valuation::from_cc_form(sum(scaled(w, 0.5), scaled(s, -0.5)))};
}

double ball_volume(int j) { return std::pow(std::numbers::pi, j / 2.0) / std::tgamma(j / 2.0 + 1); }

double steiner_volume(const Polytope& p, double eps) {
  const int n = p.ambient_dim();
  double s = 0;
  for (int j = 0; j <= n; ++j) s += ball_volume(j) * std::pow(eps, j) * intrinsic_volume(p, n - j);
  return s;
}

namespace {

struct FaceProjector {
  std::vector<double> origin;
  std::vector<std::vector<double>> basis;  // orthonormal
};

}  // namespace

SteinerEstimate steiner_monte_carlo(const Polytope& p, double eps, long samples, std::uint64_t seed) {
  const int n = p.ambient_dim();
  std::vector<std::pair<std::vector<double>, double>> planes;  // unit normal, offset: <a, y> >= offset
  for (const auto& h : p.halfspaces()) {
    auto a = to_double(h.normal);
    double s = 0;
    for (double v : a) s += v * v;
    s = std::sqrt(s);
    for (double& v : a) v /= s;
    planes.emplace_back(a, to_double(h.offset) / s);
  }
  for (const auto& e : p.equations()) {
    auto a = to_double(e.normal);
    double s = 0;
    for (double v : a) s += v * v;
    s = std::sqrt(s);
    for (double& v : a) v /= s;
    planes.emplace_back(a, to_double(e.offset) / s);
    for (double& v : a) v = -v;
    planes.emplace_back(a, -to_double(e.offset) / s);
  }
  std::vector<FaceProjector> faces;
  for (int f = 0; f < static_cast<int>(p.faces().size()); ++f) {
    Polytope face = p.face_polytope(f);
    FaceProjector fp;
    fp.origin = to_double(face.vertex(0));
    for (const auto& d : face.direction()) {
      auto v = to_double(d);
      for (const auto& b : fp.basis) {
        double t = 0;
        for (int i = 0; i < n; ++i) t += v[i] * b[i];
        for (int i = 0; i < n; ++i) v[i] -= t * b[i];
      }
      double s = 0;
      for (double x : v) s += x * x;
      s = std::sqrt(s);
      for (double& x : v) x /= s;
      fp.basis.push_back(v);
    }
    faces.push_back(std::move(fp));
  }
  auto lo = to_double(p.box_lo()), hi = to_double(p.box_hi());
  double box = 1;
  for (int i = 0; i < n; ++i) {
    lo[i] -= eps;
    hi[i] += eps;
    box *= hi[i] - lo[i];
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> coord;
  for (int i = 0; i < n; ++i) coord.emplace_back(lo[i], hi[i]);
  const double slack = 1e-12;
  long hits = 0;
  std::vector<double> y(n), z(n);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) y[i] = coord[i](rng);
    double violation = 0;
    for (const auto& [a, off] : planes) {
      double v = off;
      for (int i = 0; i < n; ++i) v -= a[i] * y[i];
      violation = std::max(violation, v);
    }
    if (violation > eps) continue;
    if (violation <= 0) {
      ++hits;
      continue;
    }
    bool inside = false;
    for (const auto& fp : faces) {
      for (int i = 0; i < n; ++i) z[i] = fp.origin[i];
      for (const auto& b : fp.basis) {
        double t = 0;
        for (int i = 0; i < n; ++i) t += (y[i] - fp.origin[i]) * b[i];
        for (int i = 0; i < n; ++i) z[i] += t * b[i];
      }
      bool in_face = true;
      for (const auto& [a, off] : planes) {
        double v = -off;
        for (int i = 0; i < n; ++i) v += a[i] * z[i];
        if (v < -slack) {
          in_face = false;
          break;
        }
      }
      if (!in_face) continue;
      double d2 = 0;
      for (int i = 0; i < n; ++i) d2 += (y[i] - z[i]) * (y[i] - z[i]);
      if (d2 <= eps * eps) {
        inside = true;
        break;
      }
    }
    if (inside) ++hits;
  }
  double frac = static_cast<double>(hits) / samples;
  return {box * frac, box * std::sqrt(frac * (1 - frac) / samples)};
}

}  // namespace polyval
