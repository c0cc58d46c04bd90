#include "polyval/cycles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace polyval {

namespace {

using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;

Cone antipodal(const Cone& c) {
  Cone a = c;
  for (auto& r : a.rays) r = neg(r);
  for (auto& h : a.halfspaces) h = neg(h);
  return a;
}

double angle(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return std::acos(std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0));
}

std::vector<double> unit_vector(std::vector<double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return v;
}

// Bisects the widest edge until every edge subtends at most max_angle. Vertices
// are kept on the unit sphere; any positive rescaling spans the same cone.
void refine_section(std::vector<std::vector<double>> verts, double max_angle, std::vector<SimplexPiece>& out) {
  for (auto& v : verts) v = unit_vector(v);
  int ba = -1, bb = -1;
  double widest = max_angle;
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      double t = angle(verts[a], verts[b]);
      if (t > widest) {
        widest = t;
        ba = static_cast<int>(a);
        bb = static_cast<int>(b);
      }
    }
  if (ba < 0) {
    SimplexPiece s;
    s.origin = verts[0];
    for (std::size_t j = 1; j < verts.size(); ++j) {
      auto v = verts[j];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= s.origin[i];
      s.edges.push_back(v);
    }
    out.push_back(std::move(s));
    return;
  }
  std::vector<double> mid(verts[ba].size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = verts[ba][i] + verts[bb][i];
  mid = unit_vector(mid);
  auto left = verts, right = verts;
  left[bb] = mid;
  right[ba] = mid;
  refine_section(left, max_angle, out);
  refine_section(right, max_angle, out);
}

// Cross-sections of the pointed pieces cone(R' + sign * L) of cone(rays) + span(lines).
std::vector<SimplexPiece> cone_sections(int n, const Cone& c) {
  Mat lines = row_basis(c.lines);
  std::set<Vec> rs;
  for (const auto& r : c.rays) {
    Vec v = lines.empty() ? r : sub(r, project_onto(lines, r));
    if (!is_zero(v)) rs.insert(primitive(v));
  }
  std::vector<SimplexPiece> out;
  const int m = static_cast<int>(lines.size());
  for (long mask = 0; mask < (1L << m); ++mask) {
    Mat gens(rs.begin(), rs.end());
    for (int i = 0; i < m; ++i) gens.push_back(mask & (1L << i) ? neg(lines[i]) : lines[i]);
    if (gens.empty()) continue;
    Cone piece = Cone::from_generators(n, gens, {});
    Vec center = zeros(n);
    for (const auto& h : piece.halfspaces) center = add(center, h);
    std::vector<Vec> pts;
    for (const auto& g : gens) {
      Rational t = dot(g, center);
      if (t <= 0) throw std::logic_error("cone_sections: cone piece is not pointed");
      pts.push_back(scale(g, Rational(1) / t));
    }
    Polytope section = Polytope::hull(pts);
    for (const auto& simplex : section.simplices()) {
      std::vector<std::vector<double>> verts;
      for (int v : simplex) verts.push_back(to_double(section.vertex(v)));
      refine_section(verts, 1.0, out);
    }
  }
  return out;
}

CycleChain build(const Polytope& p, Ambient ambient) {
  CycleChain chain;
  chain.polytope = p;
  chain.ambient = ambient;
  const int n = p.ambient_dim();
  for (int f = 0; f < static_cast<int>(p.faces().size()); ++f) {
    Cone inward = normal_cone(p, f);
    const int c = inward.dim();
    if (ambient == Ambient::N && c == 0) continue;
    CycleCell cell;
    cell.face = f;
    cell.ambient = ambient;
    cell.normal_cone = ambient == Ambient::CC ? inward : antipodal(inward);
    cell.base_dim = p.face(f).dim;
    cell.cone_dim = c;
    Polytope face = p.face_polytope(f);
    cell.face_frame = face.direction();
    Mat gens = cell.normal_cone.rays;
    gens.insert(gens.end(), cell.normal_cone.lines.begin(), cell.normal_cone.lines.end());
    cell.cone_frame = row_basis(gens);
    Mat frame = cell.face_frame;
    for (const auto& b : cell.cone_frame) frame.push_back(ambient == Ambient::CC ? neg(b) : b);
    int s = sign(determinant(frame));
    if (s == 0) throw std::logic_error("cycle: degenerate cell frame");
    if (ambient == Ambient::N && cell.base_dim % 2) s = -s;
    cell.frame_sign = s;
    cell.orientation_sign = s;
    for (const auto& simplex : face.simplices()) {
      SimplexPiece b;
      b.origin = to_double(face.vertex(simplex[0]));
      for (std::size_t j = 1; j < simplex.size(); ++j) {
        auto v = to_double(face.vertex(simplex[j]));
        for (int i = 0; i < n; ++i) v[i] -= b.origin[i];
        b.edges.push_back(v);
      }
      cell.base.push_back(std::move(b));
    }
    if (c > 0) cell.sections = cone_sections(n, ambient == Ambient::CC ? antipodal(inward) : cell.normal_cone);
    chain.cells.push_back(std::move(cell));
  }
  return chain;
}

constexpr int kMaxN = 4;
using Jac = std::array<std::array<double, kMaxN>, 2 * kMaxN>;

struct SectionNode {
  double weight = 0;
  std::array<double, kMaxN> u{};
  std::array<std::array<double, kMaxN>, kMaxN> du{};
};

// Determinant of the k x k matrix formed by the given rows of jac.
double minor_det(const Jac& jac, const std::vector<int>& rows, int k) {
  switch (k) {
    case 0:
      return 1;
    case 1:
      return jac[rows[0]][0];
    case 2: {
      const auto &a = jac[rows[0]], &b = jac[rows[1]];
      return a[0] * b[1] - a[1] * b[0];
    }
    case 3: {
      const auto &a = jac[rows[0]], &b = jac[rows[1]], &c = jac[rows[2]];
      return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
    }
    default: {
      Small m(k, k);
      for (int r = 0; r < k; ++r)
        for (int col = 0; col < k; ++col) m(r, col) = jac[rows[r]][col];
      return m.determinant();
    }
  }
}

int det_sign(const Small& m) {
  double d = m.determinant();
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

}  // namespace

int CycleChain::dim() const {
  const int n = polytope.ambient_dim();
  return ambient == Ambient::CC ? n : n - 1;
}

CycleChain characteristic_cycle(const Polytope& p) { return build(p, Ambient::CC); }
CycleChain normal_cycle(const Polytope& p) { return build(p, Ambient::N); }

CycleChain flip_cell(const CycleChain& c, int cell) {
  CycleChain r = c;
  r.cells.at(cell).orientation_sign = -r.cells.at(cell).orientation_sign;
  return r;
}

std::complex<double> integrate(const CycleChain& chain, const DifferentialForm& w, const QuadratureRule& q) {
  const int n = chain.polytope.ambient_dim();
  if (w.ambient != chain.ambient) throw IntegrationError("integrate: form and chain live on different spaces");
  if (w.n != n) throw IntegrationError("integrate: ambient dimension mismatch");
  if (w.degree != chain.dim()) throw IntegrationError("integrate: degree mismatch");
  if (w.support_box) {
    const auto& [lo, hi] = *w.support_box;
    for (const auto& v : chain.polytope.vertices())
      for (int i = 0; i < n; ++i)
        if (v[i] < lo[i] || v[i] > hi[i]) throw IntegrationError("integrate: polytope outside the form's support box");
  }
  bool vertical = false;
  for (const auto& t : w.terms) vertical = vertical || w.horizontal_degree(t) < static_cast<int>(t.wedge.size());
  const bool cc = chain.ambient == Ambient::CC;
  if (n > kMaxN) throw IntegrationError("integrate: ambient dimension above 4");
  const double radius = w.fiber_radius ? to_double(*w.fiber_radius) : 0.0;
  // Base and radial parametrizations are affine, so polynomial coefficients need
  // only enough Gauss points for exactness in those directions.
  int base_order = q.order, radial_order = q.order;
  if (w.is_polynomial()) {
    base_order = radial_order = 1;
    for (const auto& t : w.terms) {
      base_order = std::max(base_order, t.coef.polynomial().partial_degree(0, n) / 2 + 1);
      radial_order = std::max(radial_order, t.coef.polynomial().partial_degree(n, 2 * n) / 2 + 1);
    }
  }

  std::complex<double> total = 0;
  std::vector<double> y(2 * n);
  for (const auto& cell : chain.cells) {
    const int f = cell.base_dim;
    const int c = cell.cone_dim;
    if (cc && c > 0) {
      if (!vertical) continue;
      if (!w.fiber_radius) throw IntegrationError("integrate: vertical terms need a fiber radius on CC-space");
    }
    const int sect = c > 0 ? c - 1 : 0;
    const int k = f + (cc ? c : c - 1);
    const auto& base_rule = simplex_rule(f, std::min(q.order, base_order + (f + 1) / 2));
    const auto& sect_rule = simplex_rule(sect, q.order);
    const auto& radial = (cc && c > 0) ? gauss_legendre(std::min(q.order, radial_order + (sect + 2) / 2))
                                       : simplex_rule(0, q.order);
    std::vector<SimplexPiece> none{SimplexPiece{std::vector<double>(n, 0.0), {}}};
    const auto& sections = c > 0 ? cell.sections : none;

    std::complex<double> cell_total = 0;
    for (const auto& b : cell.base)
      for (const auto& s : sections) {
        // Orientation of the parameters relative to R^n (CC) or the tube boundary (N).
        Small frame(n, n);
        int col = 0;
        std::vector<double> mid = s.origin;
        for (const auto& e : s.edges)
          for (int i = 0; i < n; ++i) mid[i] += e[i] / (sect + 1);
        if (!cc) {
          for (int i = 0; i < n; ++i) frame(i, col) = mid[i];
          ++col;
        }
        for (const auto& e : b.edges) {
          for (int i = 0; i < n; ++i) frame(i, col) = e[i];
          ++col;
        }
        if (cc && c > 0) {
          for (int i = 0; i < n; ++i) frame(i, col) = mid[i];
          ++col;
        }
        for (const auto& e : s.edges) {
          for (int i = 0; i < n; ++i) frame(i, col) = e[i];
          ++col;
        }
        const int node_sign = det_sign(frame) * cell.frame_sign * cell.orientation_sign;
        if (node_sign == 0) throw std::logic_error("integrate: degenerate parametrization");

        // Section nodes: unit normal u and the tangential derivatives of w / |w|.
        std::vector<SectionNode> snodes;
        snodes.reserve(sect_rule.size());
        for (const auto& sn : sect_rule) {
          SectionNode nd;
          nd.weight = sn.weight;
          if (c > 0) {
            std::array<double, kMaxN> wv{};
            for (int i = 0; i < n; ++i) wv[i] = s.origin[i];
            for (int a = 0; a < sect; ++a)
              for (int i = 0; i < n; ++i) wv[i] += sn.s[a] * s.edges[a][i];
            double norm = 0;
            for (int i = 0; i < n; ++i) norm += wv[i] * wv[i];
            norm = std::sqrt(norm);
            for (int i = 0; i < n; ++i) nd.u[i] = wv[i] / norm;
            for (int a = 0; a < sect; ++a) {
              double along = 0;
              for (int i = 0; i < n; ++i) along += nd.u[i] * s.edges[a][i];
              for (int i = 0; i < n; ++i) nd.du[a][i] = (s.edges[a][i] - along * nd.u[i]) / norm;
            }
          }
          snodes.push_back(nd);
        }
        Jac jac{};
        for (int a = 0; a < f; ++a)
          for (int i = 0; i < n; ++i) jac[i][a] = b.edges[a][i];
        for (const auto& bn : base_rule) {
          for (int i = 0; i < n; ++i) y[i] = b.origin[i];
          for (int a = 0; a < f; ++a)
            for (int i = 0; i < n; ++i) y[i] += bn.s[a] * b.edges[a][i];
          for (const auto& rn : radial)
            for (const auto& nd : snodes) {
              double weight = bn.weight * nd.weight;
              if (c > 0) {
                if (cc) {
                  const double r = radius * rn.s[0];
                  weight *= radius * rn.weight;
                  for (int i = 0; i < n; ++i) {
                    y[n + i] = -r * nd.u[i];
                    jac[n + i][f] = -nd.u[i];
                    for (int a = 0; a < sect; ++a) jac[n + i][f + 1 + a] = -r * nd.du[a][i];
                  }
                } else {
                  for (int i = 0; i < n; ++i) {
                    y[n + i] = nd.u[i];
                    for (int a = 0; a < sect; ++a) jac[n + i][f + a] = nd.du[a][i];
                  }
                }
              } else {
                for (int i = 0; i < n; ++i) y[n + i] = 0;
              }
              std::complex<double> value = 0;
              for (const auto& t : w.terms) {
                const double d = minor_det(jac, t.wedge, k);
                if (d == 0) continue;
                value += t.scale * t.coef(y) * d;
              }
              cell_total += weight * static_cast<double>(node_sign) * value;
            }
        }
      }
    total += cell_total;
  }
  return total;
}

double stokes_check(const CycleChain& chain, const DifferentialForm& beta, const QuadratureRule& q) {
  if (beta.degree != chain.dim() - 1) throw IntegrationError("stokes_check: degree mismatch");
  return std::abs(integrate(chain, exterior_derivative(beta), q));
}

}  // namespace polyval
