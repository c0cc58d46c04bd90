#include "polyval/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

namespace polyval {

struct Polytope::Cache {
  std::once_flag tri_once;
  std::vector<std::vector<int>> simplices;
};

namespace {

struct SimplexFacet {
  std::vector<int> verts;
  Vec a;
  Rational b;
  bool alive = true;
};

Vec pick(const Vec& p, const std::vector<int>& coords) {
  Vec q(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) q[i] = p[coords[i]];
  return q;
}

// Hyperplane through d points of R^d, oriented so that `inside` is strictly positive.
SimplexFacet make_facet(const std::vector<Vec>& pts, std::vector<int> verts, const Vec& inside) {
  const int d = static_cast<int>(pts[verts[0]].size());
  Mat diffs;
  for (std::size_t i = 1; i < verts.size(); ++i) diffs.push_back(sub(pts[verts[i]], pts[verts[0]]));
  Mat ns = nullspace(diffs, d);
  if (ns.size() != 1) throw std::logic_error("hull: degenerate facet");
  SimplexFacet f;
  f.a = ns[0];
  f.b = dot(f.a, pts[verts[0]]);
  if (dot(f.a, inside) < f.b) {
    f.a = neg(f.a);
    f.b = -f.b;
  }
  std::sort(verts.begin(), verts.end());
  f.verts = std::move(verts);
  return f;
}

// Facet hyperplanes (a, b) with a.x >= b of the full-dimensional hull of pts in R^d, d >= 2.
std::vector<std::pair<Vec, Rational>> beneath_beyond(const std::vector<Vec>& pts) {
  const int d = static_cast<int>(pts[0].size());
  const int m = static_cast<int>(pts.size());
  std::vector<int> init{0};
  Mat basis;
  for (int i = 1; i < m && static_cast<int>(init.size()) < d + 1; ++i) {
    Mat trial = basis;
    trial.push_back(sub(pts[i], pts[0]));
    if (rank(trial) == static_cast<int>(trial.size())) {
      basis = std::move(trial);
      init.push_back(i);
    }
  }
  Vec c = zeros(d);
  for (int i : init) c = add(c, pts[i]);
  c = scale(c, Rational(1, d + 1));

  std::vector<SimplexFacet> facets;
  for (int skip = 0; skip <= d; ++skip) {
    std::vector<int> vs;
    for (int j = 0; j <= d; ++j)
      if (j != skip) vs.push_back(init[j]);
    facets.push_back(make_facet(pts, vs, c));
  }
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (int i : init) used[i] = true;

  for (int p = 0; p < m; ++p) {
    if (used[p]) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(facets.size()); ++f)
      if (facets[f].alive && dot(facets[f].a, pts[p]) < facets[f].b) visible.push_back(f);
    if (visible.empty()) continue;
    std::map<std::vector<int>, int> ridges;
    for (int f : visible) {
      const auto& vs = facets[f].verts;
      for (std::size_t skip = 0; skip < vs.size(); ++skip) {
        std::vector<int> r;
        for (std::size_t j = 0; j < vs.size(); ++j)
          if (j != skip) r.push_back(vs[j]);
        ++ridges[r];
      }
      facets[f].alive = false;
    }
    for (auto& [r, count] : ridges) {
      if (count != 1) continue;
      std::vector<int> vs = r;
      vs.push_back(p);
      facets.push_back(make_facet(pts, vs, c));
    }
    if (facets.size() > 4 * visible.size() + 64) {
      std::vector<SimplexFacet> keep;
      for (auto& f : facets)
        if (f.alive) keep.push_back(std::move(f));
      facets = std::move(keep);
    }
  }

  std::map<std::pair<Vec, Rational>, int> merged;
  std::vector<std::pair<Vec, Rational>> out;
  for (const auto& f : facets) {
    if (!f.alive) continue;
    Vec a = primitive(f.a);
    std::size_t k = 0;
    while (f.a[k].is_zero()) ++k;
    Rational b = f.b * (a[k] / f.a[k]);
    auto key = std::make_pair(a, b);
    if (merged.emplace(key, 0).second) out.push_back(key);
  }
  return out;
}

}  // namespace

int affine_dim(const std::vector<Vec>& pts) {
  if (pts.empty()) return -1;
  Mat diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  return rank(diffs);
}

Polytope Polytope::hull(const std::vector<Vec>& input) {
  if (input.empty()) throw std::invalid_argument("convex_hull: no points");
  const int n = static_cast<int>(input[0].size());
  for (const auto& p : input)
    if (static_cast<int>(p.size()) != n) throw std::invalid_argument("convex_hull: dimension mismatch");

  std::set<Vec> uniq(input.begin(), input.end());
  std::vector<Vec> pts(uniq.begin(), uniq.end());

  Polytope P;
  P.n_ = n;
  P.cache_ = std::make_shared<Cache>();
  Mat diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  Mat dir = diffs;
  std::vector<int> chart = row_reduce(dir);
  P.direction_ = dir;
  P.chart_ = chart;
  P.d_ = static_cast<int>(chart.size());
  const int d = P.d_;

  for (const auto& e : nullspace(dir, n)) P.equations_.push_back({e, dot(e, pts[0])});

  std::vector<Vec> q;
  for (const auto& p : pts) q.push_back(pick(p, chart));

  std::vector<std::pair<Vec, Rational>> planes;  // in chart coordinates
  if (d == 1) {
    planes.push_back({Vec{Rational(1)}, std::min_element(q.begin(), q.end())->at(0)});
    planes.push_back({Vec{Rational(-1)}, -std::max_element(q.begin(), q.end())->at(0)});
  } else if (d >= 2) {
    planes = beneath_beyond(q);
  }

  // Extreme points: the normals of the planes through them have full rank.
  std::vector<int> vert_ids;
  for (int i = 0; i < static_cast<int>(q.size()); ++i) {
    if (d == 0) {
      vert_ids.push_back(i);
      continue;
    }
    Mat normals;
    for (const auto& [a, b] : planes)
      if (dot(a, q[i]) == b) normals.push_back(a);
    if (rank(normals) == d) vert_ids.push_back(i);
  }
  for (int i : vert_ids) P.vertices_.push_back(pts[i]);  // already sorted (set order)

  std::vector<std::vector<int>> facet_sets;
  std::vector<std::pair<std::vector<int>, Halfspace>> hs;
  for (const auto& [a, b] : planes) {
    std::vector<int> on;
    for (int v = 0; v < static_cast<int>(vert_ids.size()); ++v)
      if (dot(a, q[vert_ids[v]]) == b) on.push_back(v);
    Vec A = zeros(n);
    for (int j = 0; j < d; ++j) A[chart[j]] = a[j];
    hs.push_back({on, Halfspace{A, b}});
  }
  std::sort(hs.begin(), hs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [on, h] : hs) {
    facet_sets.push_back(on);
    P.halfspaces_.push_back(std::move(h));
  }

  std::set<std::vector<int>> all(facet_sets.begin(), facet_sets.end());
  std::vector<std::vector<int>> work(facet_sets.begin(), facet_sets.end());
  while (!work.empty()) {
    std::vector<int> s = std::move(work.back());
    work.pop_back();
    for (const auto& f : facet_sets) {
      std::vector<int> meet;
      std::set_intersection(s.begin(), s.end(), f.begin(), f.end(), std::back_inserter(meet));
      if (!meet.empty() && all.insert(meet).second) work.push_back(meet);
    }
  }
  std::vector<int> everything(P.vertices_.size());
  for (std::size_t i = 0; i < everything.size(); ++i) everything[i] = static_cast<int>(i);

  for (const auto& s : all) {
    if (s == everything) continue;
    Face f;
    f.vertices = s;
    std::vector<Vec> vs;
    for (int v : s) vs.push_back(q[vert_ids[v]]);
    f.dim = affine_dim(vs);
    for (std::size_t h = 0; h < facet_sets.size(); ++h)
      if (std::includes(facet_sets[h].begin(), facet_sets[h].end(), s.begin(), s.end()))
        f.halfspaces.push_back(static_cast<int>(h));
    P.faces_.push_back(std::move(f));
  }
  std::sort(P.faces_.begin(), P.faces_.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });
  P.faces_.push_back(Face{d, everything, {}});

  P.lo_ = P.vertices_[0];
  P.hi_ = P.vertices_[0];
  for (const auto& v : P.vertices_)
    for (int i = 0; i < n; ++i) {
      if (v[i] < P.lo_[i]) P.lo_[i] = v[i];
      if (v[i] > P.hi_[i]) P.hi_[i] = v[i];
    }
  return P;
}

std::vector<int> Polytope::faces_of_dim(int k) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(faces_.size()); ++i)
    if (faces_[i].dim == k) out.push_back(i);
  return out;
}

int Polytope::find_face(const std::vector<int>& ids) const {
  for (int i = 0; i < static_cast<int>(faces_.size()); ++i)
    if (faces_[i].vertices == ids) return i;
  return -1;
}

int Polytope::carrier_face(const Vec& x) const {
  if (!contains(x)) throw std::invalid_argument("carrier_face: point outside polytope");
  std::vector<int> ids;
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
    bool on_all = true;
    for (const auto& h : halfspaces_)
      if (dot(h.normal, x) == h.offset && dot(h.normal, vertices_[v]) != h.offset) {
        on_all = false;
        break;
      }
    if (on_all) ids.push_back(v);
  }
  return find_face(ids);
}

Polytope Polytope::face_polytope(int i) const {
  std::vector<Vec> pts;
  for (int v : faces_[i].vertices) pts.push_back(vertices_[v]);
  return hull(pts);
}

std::vector<int> Polytope::subfaces(int i) const {
  std::vector<int> out;
  const auto& f = faces_[i];
  for (int j = 0; j < static_cast<int>(faces_.size()); ++j) {
    const auto& g = faces_[j];
    if (g.dim != f.dim - 1) continue;
    if (std::includes(f.vertices.begin(), f.vertices.end(), g.vertices.begin(), g.vertices.end()))
      out.push_back(j);
  }
  return out;
}

bool Polytope::contains(const Vec& x) const {
  for (const auto& e : equations_)
    if (dot(e.normal, x) != e.offset) return false;
  for (const auto& h : halfspaces_)
    if (dot(h.normal, x) < h.offset) return false;
  return true;
}

bool Polytope::contains_relint(const Vec& x) const {
  for (const auto& e : equations_)
    if (dot(e.normal, x) != e.offset) return false;
  for (const auto& h : halfspaces_)
    if (dot(h.normal, x) <= h.offset) return false;
  return true;
}

bool Polytope::contains(const Polytope& other) const {
  for (int i = 0; i < n_; ++i)
    if (other.lo_[i] < lo_[i] || other.hi_[i] > hi_[i]) return false;
  for (const auto& v : other.vertices_)
    if (!contains(v)) return false;
  return true;
}

Vec Polytope::barycenter() const {
  Vec c = zeros(n_);
  for (const auto& v : vertices_) c = add(c, v);
  return scale(c, Rational(1, static_cast<long>(vertices_.size())));
}

const std::vector<std::vector<int>>& Polytope::simplices() const {
  std::call_once(cache_->tri_once, [this] {
    std::map<int, std::vector<std::vector<int>>> memo;
    std::vector<std::vector<int>> sub_of(faces_.size());
    for (int i = 0; i < static_cast<int>(faces_.size()); ++i) sub_of[i] = subfaces(i);
    auto rec = [&](auto&& self, int fi) -> const std::vector<std::vector<int>>& {
      auto it = memo.find(fi);
      if (it != memo.end()) return it->second;
      std::vector<std::vector<int>> out;
      const Face& f = faces_[fi];
      if (f.dim == 0) {
        out.push_back({f.vertices[0]});
      } else {
        int apex = f.vertices[0];
        for (int g : sub_of[fi]) {
          const auto& gv = faces_[g].vertices;
          if (std::binary_search(gv.begin(), gv.end(), apex)) continue;
          for (const auto& s : self(self, g)) {
            auto t = s;
            t.push_back(apex);
            std::sort(t.begin(), t.end());
            out.push_back(std::move(t));
          }
        }
      }
      return memo.emplace(fi, std::move(out)).first->second;
    };
    cache_->simplices = rec(rec, self_face());
  });
  return cache_->simplices;
}

Rational Polytope::chart_volume(const std::vector<int>& coords) const {
  const int k = d_;
  if (static_cast<int>(coords.size()) != k) throw std::invalid_argument("chart_volume: wrong chart size");
  if (k == 0) return 1;
  Rational total = 0;
  Rational fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  for (const auto& s : simplices()) {
    Mat m;
    for (int j = 1; j <= k; ++j) m.push_back(pick(sub(vertices_[s[j]], vertices_[s[0]]), coords));
    Rational det = determinant(m);
    total += abs(det);
  }
  return total / fact;
}

double Polytope::volume() const {
  const int k = d_;
  if (k == 0) return 1.0;
  double fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  double total = 0;
  for (const auto& s : simplices()) {
    Mat e;
    for (int j = 1; j <= k; ++j) e.push_back(sub(vertices_[s[j]], vertices_[s[0]]));
    Mat g(k, Vec(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) g[a][b] = dot(e[a], e[b]);
    total += std::sqrt(std::max(0.0, to_double(determinant(g))));
  }
  return total / fact;
}

std::optional<Polytope> polytope_from_constraints(int n, const std::vector<Equation>& eqs,
                                                  const std::vector<Halfspace>& hs) {
  Mat E;
  Vec e;
  for (const auto& q : eqs) {
    E.push_back(q.normal);
    e.push_back(q.offset);
  }
  auto x0 = solve_any(E, e, n);
  if (!x0) return std::nullopt;
  Mat N = nullspace(E, n);
  const int m = static_cast<int>(N.size());

  std::set<std::pair<Vec, Rational>> rows;
  for (const auto& h : hs) {
    Vec r(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) r[j] = dot(h.normal, N[j]);
    Rational rhs = h.offset - dot(h.normal, *x0);
    if (is_zero(r)) {
      if (rhs > 0) return std::nullopt;
      continue;
    }
    Vec p = primitive(r);
    std::size_t k = 0;
    while (r[k].is_zero()) ++k;
    rows.insert({p, rhs * (p[k] / r[k])});
  }
  std::vector<std::pair<Vec, Rational>> R(rows.begin(), rows.end());

  auto lift = [&](const Vec& y) {
    Vec x = *x0;
    for (int j = 0; j < m; ++j) x = add(x, scale(N[j], y[j]));
    return x;
  };
  auto feasible = [&](const Vec& y) {
    for (const auto& [a, b] : R)
      if (dot(a, y) < b) return false;
    return true;
  };

  std::vector<Vec> pts;
  if (m == 0) {
    if (!feasible(Vec{})) return std::nullopt;
    pts.push_back(*x0);
    return Polytope::hull(pts);
  }
  const int k = static_cast<int>(R.size());
  if (k < m) throw std::invalid_argument("polytope_from_constraints: unbounded set");
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[i] = i;
  std::set<Vec> found;
  while (true) {
    Mat A;
    Vec b;
    for (int i : idx) {
      A.push_back(R[i].first);
      b.push_back(R[i].second);
    }
    auto y = solve_square(A, b);
    if (y && !found.count(*y) && feasible(*y)) found.insert(*y);
    int pos = m - 1;
    while (pos >= 0 && idx[pos] == k - m + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
  }
  if (found.empty()) return std::nullopt;
  for (const auto& y : found) pts.push_back(lift(y));
  return Polytope::hull(pts);
}

bool boxes_overlap(const Polytope& p, const Polytope& q) {
  for (int i = 0; i < p.ambient_dim(); ++i)
    if (p.box_hi()[i] < q.box_lo()[i] || q.box_hi()[i] < p.box_lo()[i]) return false;
  return true;
}

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim()) throw std::invalid_argument("intersect: dimension mismatch");
  if (!boxes_overlap(p, q)) return std::nullopt;
  if (q.contains(p)) return p;
  if (p.contains(q)) return q;
  std::vector<Equation> eqs = p.equations();
  eqs.insert(eqs.end(), q.equations().begin(), q.equations().end());
  std::vector<Halfspace> hs = p.halfspaces();
  hs.insert(hs.end(), q.halfspaces().begin(), q.halfspaces().end());
  return polytope_from_constraints(p.ambient_dim(), eqs, hs);
}

std::optional<Polytope> intersect(const Polytope& p, const std::vector<Halfspace>& extra) {
  std::vector<Halfspace> hs = p.halfspaces();
  hs.insert(hs.end(), extra.begin(), extra.end());
  return polytope_from_constraints(p.ambient_dim(), p.equations(), hs);
}

Polytope affine_image(const Polytope& p, const Rational& t, const Vec& x) {
  if (t < 0) throw std::invalid_argument("affine_image: negative scale");
  if (static_cast<int>(x.size()) != p.ambient_dim()) throw std::invalid_argument("affine_image: dimension mismatch");
  std::vector<Vec> pts;
  for (const auto& v : p.vertices()) pts.push_back(add(scale(v, t), x));
  return Polytope::hull(pts);
}

Polytope negate(const Polytope& p) {
  std::vector<Vec> pts;
  for (const auto& v : p.vertices()) pts.push_back(neg(v));
  return Polytope::hull(pts);
}

Polytope unit_cube(int n) {
  std::vector<Vec> pts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec v = zeros(n);
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) v[i] = 1;
    pts.push_back(v);
  }
  return Polytope::hull(pts);
}

Polytope standard_simplex(int n) {
  std::vector<Vec> pts{zeros(n)};
  for (int i = 0; i < n; ++i) pts.push_back(unit(n, i));
  return Polytope::hull(pts);
}

}  // namespace polyval
