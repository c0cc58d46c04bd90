#pragma once

#include "polyval/polytope.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyval {

using Bits = boost::dynamic_bitset<>;

class Subdivision {
 public:
  // target: convex pieces whose union is the subdivided set.
  Subdivision(std::vector<Polytope> target, std::vector<Polytope> cells);

  const std::vector<Polytope>& target() const { return target_; }
  const std::vector<Polytope>& cells() const { return cells_; }
  const Polytope& cell(int i) const { return cells_[i]; }
  int size() const { return static_cast<int>(cells_.size()); }
  int ambient_dim() const { return n_; }
  int dim() const;  // largest cell dimension
  // strata()[r] = indices of cells of dimension r.
  std::vector<std::vector<int>> strata() const;

  // down(i): cells contained in cell i (including i); up(i): cells containing i.
  const Bits& down(int i) const;
  const Bits& up(int i) const;
  bool cell_contains(int outer, int inner) const { return down(outer)[inner]; }

  int index_of(const Polytope& p) const;
  bool target_contains(const Vec& x) const;
  // Same cells in canonical (lexicographic vertex list) order.
  Subdivision canonical() const;

 private:
  int n_;
  std::vector<Polytope> target_;
  std::vector<Polytope> cells_;
  struct Lattice;
  std::shared_ptr<Lattice> lattice_;
};

using SubdivisionPtr = std::shared_ptr<const Subdivision>;

// A union of cells of a subdivision.
class ComplexSet {
 public:
  ComplexSet(SubdivisionPtr d, std::vector<int> members);
  static ComplexSet from_closure(SubdivisionPtr d, const Bits& closure);

  const Subdivision& subdivision() const { return *d_; }
  const SubdivisionPtr& subdivision_ptr() const { return d_; }
  const std::vector<int>& members() const { return members_; }
  const std::vector<int>& reduced() const { return reduced_; }
  // Every cell contained in the union.
  const Bits& closure() const { return closure_; }
  bool empty() const { return closure_.none(); }

  ComplexSet unite(const ComplexSet& o) const;
  ComplexSet meet(const ComplexSet& o) const;
  bool operator==(const ComplexSet& o) const { return closure_ == o.closure_; }

 private:
  SubdivisionPtr d_;
  std::vector<int> members_;
  std::vector<int> reduced_;
  Bits closure_;
};

// Maximal elements of a down-closed cell set.
std::vector<int> maximal_cells(const Subdivision& d, const Bits& closure);
Bits down_closure(const Subdivision& d, const std::vector<int>& members);

struct Violation {
  int condition = 0;  // 1 = coverage, 2 = relative-interior containment, 0 = cell outside target
  std::string message;
  std::optional<Vec> witness;
  std::vector<int> cells;
};

struct SubdivisionReport {
  bool ok = true;
  std::vector<Violation> violations;
};

SubdivisionReport verify_subdivision(const Subdivision& d, std::uint64_t seed = 1);

// Every coarse cell is subdivided by the fine cells it contains.
SubdivisionReport verify_refinement(const Subdivision& fine, const Subdivision& coarse, std::uint64_t seed = 1);

struct NonTransversal : std::runtime_error {
  NonTransversal(const std::string& msg, int a, int b, Vec w)
      : std::runtime_error(msg), cell_a(a), cell_b(b), witness(std::move(w)) {}
  int cell_a, cell_b;
  Vec witness;
};

// Throws NonTransversal with a witness pair and point when the check fails.
void check_transversal(const Subdivision& a, const Subdivision& b);
bool transversal(const Subdivision& a, const Subdivision& b);

Subdivision intersect_subdivisions(const Subdivision& a, const Subdivision& b);

std::vector<int> reduced_decomposition(const ComplexSet& x);

// Open axis-aligned box.
struct Box {
  Vec lo, hi;
  bool contains(const Vec& x) const;
  bool contains(const Polytope& p) const;
};

struct CoverError : std::runtime_error {
  CoverError(const std::string& msg, Vec w) : std::runtime_error(msg), witness(std::move(w)) {}
  Vec witness;
};

// Throws CoverError with an uncovered target point when the boxes miss part of the target.
void check_cover(const std::vector<Polytope>& target, const std::vector<Box>& boxes);

struct PerturbOptions {
  std::uint64_t seed = 1;
  int retries = 32;
  long denominator = 10007;  // perturbation entries are multiples of 1/denominator
};

Subdivision refine_subordinate(const Subdivision& d, const std::vector<Box>& cover, const PerturbOptions& opt = {});

Subdivision cone_triangulate(const Subdivision& d);

struct RefinementScheme {
  Subdivision d3;             // perturbed Kuhn grid over an enlarged box
  Subdivision d3_restricted;  // d3 cut down to the common target
  Subdivision dp, dpp;        // d1 and d2 intersected with d3
};

struct RetryBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RefinementScheme common_refinement_scheme(const Subdivision& d1, const Subdivision& d2, const PerturbOptions& opt = {});

// The polytope together with all of its faces.
Subdivision face_subdivision(const Polytope& p);

// Perturbed cube grid (kuhn = false) or Kuhn-triangulated grid over an enlarged
// bounding box of `region`; its target is the perturbed grid box.
Subdivision perturbed_grid(const std::vector<Polytope>& region, int cells_per_axis, bool kuhn, std::uint64_t seed,
                           long denominator);

}  // namespace polyval
