#pragma once

#include "polyval/subdivision.hpp"

#include <random>

namespace polyval {

// Simplicial complex given by its top simplices over a point table.
struct SimplicialComplex {
  std::vector<Vec> points;
  std::vector<std::vector<int>> top;

  // Every face of every top simplex, as sorted point-id lists.
  std::vector<std::vector<int>> all_faces() const;
  // Alternating count of faces by dimension.
  long euler_characteristic() const;
  std::vector<Polytope> cells() const;
};

// Stellar moves on a random triangle (n = 2) or tetrahedron (n = 3) until the
// next move would exceed max_cells.
SimplicialComplex random_triangulation(int n, int max_cells, std::mt19937_64& rng);

// Kuhn triangulation of the grid {0..k}^n scaled by 1.
SimplicialComplex kuhn_grid(int n, int k);

// Keeps each top simplex with probability `keep` (at least one survives).
SimplicialComplex random_subcomplex(const SimplicialComplex& c, double keep, std::mt19937_64& rng);

// Integer-coordinate random point cloud hull.
Polytope random_hull(int n, int points, std::mt19937_64& rng, int range = 6);

Subdivision to_subdivision(const SimplicialComplex& c);

}  // namespace polyval
