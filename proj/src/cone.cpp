#include "polyval/cone.hpp"

#include <set>
#include <stdexcept>

namespace polyval {

namespace {

Vec normalize_ray(const Vec& v) { return primitive(v); }

}  // namespace

int Cone::dim() const {
  Mat all = rays;
  all.insert(all.end(), lines.begin(), lines.end());
  return rank(all);
}

bool Cone::contains(const Vec& v) const {
  for (const auto& e : equations)
    if (!dot(e, v).is_zero()) return false;
  for (const auto& a : halfspaces)
    if (dot(a, v) < 0) return false;
  return true;
}

Cone Cone::from_constraints(int n, const Mat& hs, const Mat& eqs) {
  Cone c;
  c.apex = zeros(n);
  c.halfspaces = hs;
  c.equations = eqs;
  Mat all = hs;
  all.insert(all.end(), eqs.begin(), eqs.end());
  c.lines = nullspace(all, n);

  // Extreme rays: one-dimensional solution sets of the base system plus n - 1 - r0 tight rows.
  Mat base = eqs;
  base.insert(base.end(), c.lines.begin(), c.lines.end());
  const int r0 = rank(base);
  const int need = n - 1 - r0;
  std::vector<Vec> rows;
  {
    std::set<Vec> seen;
    for (const auto& a : hs) {
      Vec p = primitive(a);
      if (!is_zero(p) && seen.insert(p).second) rows.push_back(p);
    }
  }
  std::set<Vec> found;
  const int k = static_cast<int>(rows.size());
  if (need >= 0 && need <= k) {
    std::vector<int> idx(static_cast<std::size_t>(need));
    for (int i = 0; i < need; ++i) idx[i] = i;
    while (true) {
      Mat sys = base;
      for (int i : idx) sys.push_back(rows[i]);
      Mat ns = nullspace(sys, n);
      if (ns.size() == 1) {
        for (int s : {1, -1}) {
          Vec r = scale(ns[0], s);
          bool ok = true;
          for (const auto& a : rows)
            if (dot(a, r) < 0) { ok = false; break; }
          if (ok) found.insert(normalize_ray(r));
        }
      }
      int pos = need - 1;
      while (pos >= 0 && idx[pos] == k - need + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < need; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  c.rays.assign(found.begin(), found.end());
  return c;
}

Cone Cone::from_generators(int n, const Mat& rays, const Mat& lines) {
  Cone polar = from_constraints(n, rays, lines);
  Cone c;
  c.apex = zeros(n);
  c.rays = rays;
  c.lines = lines;
  c.halfspaces = polar.rays;
  c.equations = polar.lines;
  return c;
}

Cone tangent_cone(const Polytope& p, const Vec& x) {
  if (!p.contains(x)) throw std::invalid_argument("tangent_cone: point not in polytope");
  Mat hs, eqs;
  for (const auto& h : p.halfspaces())
    if (dot(h.normal, x) == h.offset) hs.push_back(h.normal);
  for (const auto& e : p.equations()) eqs.push_back(e.normal);
  return Cone::from_constraints(p.ambient_dim(), hs, eqs);
}

Cone dual_cone(const Cone& c) {
  if (!is_zero(c.apex)) throw std::invalid_argument("dual_cone: apex must be the origin");
  Cone d;
  d.apex = c.apex;
  d.rays = c.halfspaces;
  d.lines = c.equations;
  d.halfspaces = c.rays;
  d.equations = c.lines;
  return d;
}

Cone normal_cone(const Polytope& p, int face_index) {
  const Face& f = p.face(face_index);
  Mat rays, lines;
  for (int h : f.halfspaces) rays.push_back(p.halfspaces()[h].normal);
  for (const auto& e : p.equations()) lines.push_back(e.normal);
  return Cone::from_generators(p.ambient_dim(), rays, lines);
}

bool contains(const Cone& outer, const Cone& inner) {
  for (const auto& r : inner.rays)
    if (!outer.contains(r)) return false;
  for (const auto& l : inner.lines)
    if (!outer.contains(l) || !outer.contains(neg(l))) return false;
  return true;
}

bool same_set(const Cone& a, const Cone& b) { return contains(a, b) && contains(b, a); }

}  // namespace polyval
