#pragma once

#include "polyval/cone.hpp"
#include "polyval/forms.hpp"
#include "polyval/quadrature.hpp"

#include <complex>
#include <stdexcept>

namespace polyval {

// Affine simplex origin + sum_i s_i * edges[i] in double precision.
struct SimplexPiece {
  std::vector<double> origin;
  std::vector<std::vector<double>> edges;
};

struct CycleCell {
  int face = 0;            // index into the polytope's faces
  Cone normal_cone;        // CC: (T_x P)° for x in relint of the face; N: its antipodal image
  int orientation_sign = 1;
  Ambient ambient = Ambient::CC;

  int base_dim = 0;
  int cone_dim = 0;
  // Spherical part has dimension cone_dim - 1 on N-space.
  int fiber_dim() const { return ambient == Ambient::CC ? cone_dim : cone_dim - 1; }

  // Orientation of (face frame, cone frame) relative to the pushed-forward orientation
  // of R^n under (x, xi) -> x - xi (CC) or the tube-boundary orientation (N).
  int frame_sign = 1;
  Mat face_frame;
  Mat cone_frame;

  // Quadrature pieces: triangulated face and triangulated cross-sections of the
  // outward cone pieces (each point w parametrizes the unit normal w / |w|).
  std::vector<SimplexPiece> base;
  std::vector<SimplexPiece> sections;
};

struct CycleChain {
  Polytope polytope;
  Ambient ambient = Ambient::CC;
  std::vector<CycleCell> cells;

  int dim() const;
};

CycleChain characteristic_cycle(const Polytope& p);
CycleChain normal_cycle(const Polytope& p);
CycleChain flip_cell(const CycleChain& c, int cell);

struct IntegrationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::complex<double> integrate(const CycleChain& chain, const DifferentialForm& w, const QuadratureRule& q);
// |integral of d(beta) over the chain|.
double stokes_check(const CycleChain& chain, const DifferentialForm& beta, const QuadratureRule& q);

}  // namespace polyval
