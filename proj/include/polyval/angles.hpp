#pragma once

#include "polyval/polytope.hpp"

#include <cstdint>

namespace polyval {

struct AngleEstimate {
  double value = 0;
  double std_error = 0;  // nonzero only for sampled estimates
  bool sampled = false;
};

struct AngleOptions {
  std::uint64_t seed = 1;
  long samples = 1000000;
};

// Normalized solid angle of the normal cone of a face, measured inside the
// orthogonal complement of the face within aff P.
AngleEstimate external_angle(const Polytope& p, int face_index, const AngleOptions& opt = {});
double external_angle_value(const Polytope& p, int face_index);

// Van Oosterom-Strackee solid angle of the cone spanned by three vectors of a
// 3-dimensional subspace (any ambient dimension).
double solid_angle(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c);

}  // namespace polyval
