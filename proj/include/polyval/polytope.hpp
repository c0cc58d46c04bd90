#pragma once

#include "polyval/linalg.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace polyval {

// <normal, x> >= offset
struct Halfspace {
  Vec normal;
  Rational offset;
};

// <normal, x> == offset
struct Equation {
  Vec normal;
  Rational offset;
};

struct Face {
  int dim = 0;
  std::vector<int> vertices;    // sorted indices into Polytope::vertices()
  std::vector<int> halfspaces;  // facets of the polytope containing this face
};

class Polytope {
 public:
  static Polytope hull(const std::vector<Vec>& points);

  int ambient_dim() const { return n_; }
  int dim() const { return d_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const Vec& vertex(int i) const { return vertices_[i]; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::vector<Equation>& equations() const { return equations_; }

  // Sorted by (dim, vertex set); the last entry is the polytope itself.
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int i) const { return faces_[i]; }
  int self_face() const { return static_cast<int>(faces_.size()) - 1; }
  std::vector<int> faces_of_dim(int k) const;
  // Index of the face with exactly these (sorted) vertex indices, or -1.
  int find_face(const std::vector<int>& vertex_ids) const;
  // Index of the face whose relative interior contains x (x must lie in P).
  int carrier_face(const Vec& x) const;
  Polytope face_polytope(int face_index) const;
  // Faces of dimension dim(f) - 1 contained in face f.
  std::vector<int> subfaces(int face_index) const;

  bool contains(const Vec& x) const;
  bool contains_relint(const Vec& x) const;
  bool contains(const Polytope& other) const;

  Vec barycenter() const;
  // Basis of the direction space of the affine hull.
  const Mat& direction() const { return direction_; }
  // Coordinates on which projection is injective along the affine hull.
  const std::vector<int>& chart() const { return chart_; }

  // Pulling triangulation into dim()-simplices (vertex index lists).
  const std::vector<std::vector<int>>& simplices() const;
  // dim()-dimensional volume of the projection onto `coords` (|coords| == dim()).
  Rational chart_volume(const std::vector<int>& coords) const;
  // Euclidean dim()-dimensional volume.
  double volume() const;

  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }

  bool operator==(const Polytope& o) const { return vertices_ == o.vertices_; }
  bool operator!=(const Polytope& o) const { return !(*this == o); }
  bool operator<(const Polytope& o) const { return vertices_ < o.vertices_; }

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> halfspaces_;
  std::vector<Equation> equations_;
  std::vector<Face> faces_;
  Mat direction_;
  std::vector<int> chart_;
  Vec lo_, hi_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Vertices of {x : E x = e, A x >= b}; nullopt when empty. The set must be bounded.
std::optional<Polytope> polytope_from_constraints(int n, const std::vector<Equation>& eqs,
                                                  const std::vector<Halfspace>& hs);
std::optional<Polytope> intersect(const Polytope& p, const Polytope& q);
std::optional<Polytope> intersect(const Polytope& p, const std::vector<Halfspace>& hs);
bool boxes_overlap(const Polytope& p, const Polytope& q);

Polytope affine_image(const Polytope& p, const Rational& t, const Vec& x);
Polytope negate(const Polytope& p);

Polytope unit_cube(int n);
Polytope standard_simplex(int n);

// Affine rank (dimension of the affine hull) of a point set.
int affine_dim(const std::vector<Vec>& pts);

}  // namespace polyval
