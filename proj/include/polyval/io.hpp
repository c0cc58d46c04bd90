#pragma once

#include "polyval/cycles.hpp"
#include "polyval/measure.hpp"
#include "polyval/valuations.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace polyval {

using Json = nlohmann::ordered_json;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json to_json(const Vec& v);
Vec vec_from_json(const Json& j);

// {"dim": n, "vertices": [["p/q", ...], ...]}
Json to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j);
// Adds facets, f-vector and face list to the vertex description.
Json describe(const Polytope& p);

// {"target": [Polytope, ...] or Polytope, "cells": [Polytope, ...]}
Json to_json(const Subdivision& d);
Subdivision subdivision_from_json(const Json& j);

// {"values": {"<cell>": ["re", "im"], ...}}; exact entries as "p/q" or integers, decimals are inexact.
Json to_json(const GeneratorTable& m);
GeneratorTable generators_from_json(const Json& j);
Json value_json(const MeasureValue& v);
Json value_json(std::complex<double> z);

// Monomials are written as "x1^2*xi3" (CC) or "x1*u2" (N); "1" is the constant.
Json to_json(const Polynomial& p, Ambient a, int n);
Polynomial polynomial_from_json(const Json& j, Ambient a, int n);

// {"ambient", "n", "degree", "terms": [{"coef": {"poly": {...}}, "wedge": ["dx1", "dxi2"], "scale": [re, im]}],
//  "support_box": [[lo, hi], ...], "fiber_radius": "p/q"}
Json to_json(const DifferentialForm& w);
DifferentialForm form_from_json(const Json& j);

// A valuation file is a CC-form, or {"density": {"poly": ...}, "eta": N-form}, or {"intrinsic": k, "n": n}.
Valuation valuation_from_json(const Json& j);

Json to_json(const CycleChain& c);

Json read_json_file(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace polyval
