#pragma once

#include "polyval/rational.hpp"

#include <optional>
#include <vector>

namespace polyval {

using Mat = std::vector<Vec>;  // row major

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Rational& s);
Vec neg(const Vec& a);
Rational dot(const Vec& a, const Vec& b);
Vec zeros(int n);
Vec unit(int n, int i);
bool is_zero(const Vec& a);

// Row echelon form in place; returns pivot columns.
std::vector<int> row_reduce(Mat& m);
int rank(Mat m);

// Basis of {x : rows * x = 0}. `cols` is needed when rows is empty.
Mat nullspace(const Mat& rows, int cols);

// Basis of the row space (reduced rows).
Mat row_basis(const Mat& rows);

// Unique solution of A x = b, or nullopt when A is singular or the system is
// inconsistent. A must be square.
std::optional<Vec> solve_square(const Mat& a, const Vec& b);

// Any solution of A x = b (free variables set to zero), nullopt if inconsistent.
std::optional<Vec> solve_any(const Mat& a, const Vec& b, int cols);

Rational determinant(Mat m);

// Orthogonal projection onto span(basis) (exact; basis need not be orthogonal).
Vec project_onto(const Mat& basis, const Vec& v);

// Scales to a primitive integer vector, preserving direction.
Vec primitive(const Vec& v);

}  // namespace polyval
