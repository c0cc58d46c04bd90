#pragma once

#include "polyval/polytope.hpp"

namespace polyval {

// Polyhedral cone apex + cone(rays) + span(lines) = {x : <a, x - apex> >= 0, <e, x - apex> = 0}.
struct Cone {
  Vec apex;
  Mat rays;
  Mat lines;
  Mat halfspaces;
  Mat equations;

  int ambient_dim() const { return static_cast<int>(apex.size()); }
  int dim() const;
  bool is_pointed() const { return lines.empty(); }
  bool contains(const Vec& v) const;  // v taken relative to the apex

  static Cone from_constraints(int n, const Mat& halfspaces, const Mat& equations);
  static Cone from_generators(int n, const Mat& rays, const Mat& lines);
};

Cone tangent_cone(const Polytope& p, const Vec& x);
Cone dual_cone(const Cone& c);
// (T_x P)° for x in the relative interior of the face; generated by the inward
// facet normals of the face plus the normals of the affine hull.
Cone normal_cone(const Polytope& p, int face_index);
// Mutual containment of generator sets in the other's constraints.
bool same_set(const Cone& a, const Cone& b);
bool contains(const Cone& outer, const Cone& inner);

}  // namespace polyval
