#include "polyval/angles.hpp"
#include "polyval/corpus.hpp"
#include "polyval/cycles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace polyval;

namespace {

Vec V(std::initializer_list<long> xs) {
  Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Polytope H(std::initializer_list<Vec> pts) { return Polytope::hull(std::vector<Vec>(pts)); }

std::vector<Polytope> corpus() {
  std::mt19937_64 rng(11);
  std::vector<Polytope> out{unit_cube(2),
                            standard_simplex(2),
                            unit_cube(3),
                            standard_simplex(3),
                            H({V({0, 0}), V({3, 1})}),
                            H({V({1, 0, 0}), V({0, 2, 0}), V({0, 0, 1})}),
                            H({V({1, 2, 3})}),
                            H({V({0}), V({2})})};
  for (int i = 0; i < 2; ++i) out.push_back(random_hull(2, 7, rng));
  for (int i = 0; i < 2; ++i) out.push_back(random_hull(3, 8, rng));
  return out;
}

// Oracle: sum over k-faces of k-volume times external angle.
double intrinsic_oracle(const Polytope& p, int k) {
  double s = 0;
  for (int f : p.faces_of_dim(k)) s += p.face_polytope(f).volume() * external_angle(p, f, {1, 4000000}).value;
  return s;
}

Polynomial random_poly(int nvars, int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-5, 5), var(0, nvars - 1);
  Polynomial p(nvars);
  for (int t = 0; t < 6; ++t) {
    Polynomial::Exponent e(nvars, 0);
    int d = std::uniform_int_distribution<int>(0, degree)(rng);
    for (int j = 0; j < d; ++j) ++e[var(rng)];
    p.add_term(e, Rational(coef(rng), 4));
  }
  return p;
}

DifferentialForm random_form(Ambient a, int n, int degree, std::mt19937_64& rng, const Polynomial& factor) {
  DifferentialForm w;
  w.ambient = a;
  w.n = n;
  w.degree = degree;
  std::vector<int> all(2 * n);
  std::iota(all.begin(), all.end(), 0);
  for (int t = 0; t < 4; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> idx(all.begin(), all.begin() + degree);
    w.add(random_poly(2 * n, 3, rng) * factor, idx);
  }
  return w;
}

CycleChain only_cell(const CycleChain& c, int i) {
  CycleChain r = c;
  r.cells = {c.cells[i]};
  return r;
}

}  // namespace

TEST(CharacteristicCycle, PointHasOneCellWithWholeFiber) {
  Polytope p = H({V({1, 2})});
  auto cc = characteristic_cycle(p);
  ASSERT_EQ(cc.cells.size(), 1u);
  EXPECT_EQ(cc.cells[0].cone_dim, 2);
  EXPECT_EQ(cc.cells[0].normal_cone.lines.size(), 2u);
  auto nc = normal_cycle(p);
  ASSERT_EQ(nc.cells.size(), 1u);
  EXPECT_EQ(nc.cells[0].fiber_dim(), 1);
}

TEST(CharacteristicCycle, UnitSegmentCones) {
  Polytope p = H({V({0}), V({1})});
  auto cc = characteristic_cycle(p);
  ASSERT_EQ(cc.cells.size(), 3u);
  for (const auto& cell : cc.cells) {
    const Face& f = p.face(cell.face);
    if (f.dim == 1) {
      EXPECT_EQ(cell.cone_dim, 0);
    } else {
      ASSERT_EQ(cell.normal_cone.rays.size(), 1u);
      Rational expected = p.vertex(f.vertices[0])[0] == 0 ? 1 : -1;
      EXPECT_EQ(sign(cell.normal_cone.rays[0][0]), sign(expected));
    }
  }
}

TEST(CharacteristicCycle, SquareCellsAndDimensions) {
  auto cc = characteristic_cycle(unit_cube(2));
  EXPECT_EQ(cc.cells.size(), 9u);
  auto nc = normal_cycle(unit_cube(2));
  EXPECT_EQ(nc.cells.size(), 8u);
  for (const auto& p : corpus()) {
    const int n = p.ambient_dim();
    for (const auto& cell : characteristic_cycle(p).cells) EXPECT_EQ(cell.base_dim + cell.fiber_dim(), n);
    for (const auto& cell : normal_cycle(p).cells) {
      EXPECT_EQ(cell.base_dim + cell.fiber_dim(), n - 1);
      EXPECT_GE(cell.fiber_dim(), 0);
    }
  }
}

TEST(CharacteristicCycle, ConicInvariance) {
  for (const auto& p : corpus())
    for (const auto& cell : characteristic_cycle(p).cells) {
      Cone dilated = cell.normal_cone;
      for (auto& r : dilated.rays) r = scale(r, Rational(7, 3));
      EXPECT_TRUE(same_set(cell.normal_cone, dilated));
    }
}

TEST(CharacteristicCycle, NegationBijection) {
  for (const auto& p : corpus()) {
    Polytope q = negate(p);
    auto a = characteristic_cycle(p), b = characteristic_cycle(q);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (const auto& cell : a.cells) {
      std::vector<Vec> verts;
      for (int v : p.face(cell.face).vertices) verts.push_back(neg(p.vertex(v)));
      Polytope image = Polytope::hull(verts);
      bool found = false;
      for (const auto& other : b.cells) {
        if (q.face_polytope(other.face) != image) continue;
        Cone flipped = cell.normal_cone;
        for (auto& r : flipped.rays) r = neg(r);
        for (auto& h : flipped.halfspaces) h = neg(h);
        EXPECT_TRUE(same_set(flipped, other.normal_cone));
        found = true;
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(NormalCycle, GaussDegreeIsOne) {
  QuadratureRule q;
  for (const auto& p : corpus()) {
    const int n = p.ambient_dim();
    auto value = integrate(normal_cycle(p), lipschitz_killing_form(n, 0), q);
    EXPECT_NEAR(value.real(), 1.0, 1e-6);
    EXPECT_NEAR(value.imag(), 0.0, 1e-12);
  }
}

TEST(NormalCycle, SquareVertexArcsAreQuarterCircles) {
  Polytope sq = unit_cube(2);
  auto nc = normal_cycle(sq);
  DifferentialForm arc;
  arc.ambient = Ambient::N;
  arc.n = 2;
  arc.degree = 1;
  arc.add(Polynomial::variable(4, 2), {3});
  arc.add(Polynomial::variable(4, 3) * Rational(-1), {2});
  double total = 0;
  for (int i = 0; i < static_cast<int>(nc.cells.size()); ++i) {
    double v = integrate(only_cell(nc, i), arc, {}).real();
    if (nc.cells[i].base_dim == 0) {
      EXPECT_NEAR(v, std::numbers::pi / 2, 1e-12);
    } else {
      EXPECT_NEAR(v, 0.0, 1e-15);
    }
    total += v;
  }
  EXPECT_NEAR(total, 2 * std::numbers::pi, 1e-12);
}

TEST(NormalCycle, LipschitzKillingFormsGiveIntrinsicVolumes) {
  for (const auto& p : corpus()) {
    const int n = p.ambient_dim();
    auto nc = normal_cycle(p);
    for (int k = 1; k < n; ++k) {
      double v = integrate(nc, lipschitz_killing_form(n, k), {}).real();
      EXPECT_NEAR(v, intrinsic_oracle(p, k), 2e-3 * std::max(1.0, std::abs(v)));
    }
  }
  auto nc = normal_cycle(unit_cube(3));
  EXPECT_NEAR(integrate(nc, lipschitz_killing_form(3, 1), {}).real(), 3.0, 1e-9);
  EXPECT_NEAR(integrate(nc, lipschitz_killing_form(3, 2), {}).real(), 3.0, 1e-9);
}

TEST(Integrate, ZeroFormGivesZero) {
  DifferentialForm w;
  w.ambient = Ambient::CC;
  w.n = 2;
  w.degree = 2;
  EXPECT_EQ(integrate(characteristic_cycle(unit_cube(2)), w, {}), std::complex<double>(0));
}

TEST(Integrate, HorizontalFormOnlySeesInteriorCell) {
  Callback bump = [](const std::vector<double>& y) {
    return std::complex<double>(std::exp(-y[0] * y[0] - 2 * y[1]) * std::cos(y[0] * y[1]));
  };
  DifferentialForm w;
  w.ambient = Ambient::CC;
  w.n = 2;
  w.degree = 2;
  w.add(bump, {0, 1});
  QuadratureRule q{24, 1e-9};
  auto lhs = integrate(characteristic_cycle(unit_cube(2)), w, q);
  // Direct tensor Gauss-Legendre over the square.
  std::complex<double> rhs = 0;
  for (const auto& a : gauss_legendre(40))
    for (const auto& b : gauss_legendre(40)) rhs += a.weight * b.weight * bump({a.s[0], b.s[0], 0, 0});
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-9);
}

TEST(Integrate, Errors) {
  DifferentialForm w;
  w.ambient = Ambient::CC;
  w.n = 2;
  w.degree = 1;
  EXPECT_THROW(integrate(characteristic_cycle(unit_cube(2)), w, {}), IntegrationError);
  w.degree = 2;
  w.add(Polynomial::constant(4, 1), {2, 3});
  EXPECT_THROW(integrate(characteristic_cycle(unit_cube(2)), w, {}), IntegrationError);
  w.fiber_radius = Rational(1);
  w.support_box = std::make_pair(V({0, 0}), Vec{Rational(1, 2), 1});
  EXPECT_THROW(integrate(characteristic_cycle(unit_cube(2)), w, {}), IntegrationError);
  EXPECT_THROW(stokes_check(characteristic_cycle(unit_cube(2)), w, {}), IntegrationError);
}

TEST(Stokes, NormalCycleOfSquare) {
  std::mt19937_64 rng(21);
  auto nc = normal_cycle(unit_cube(2));
  QuadratureRule q{64, 1e-10};
  DifferentialForm beta;
  beta.ambient = Ambient::N;
  beta.n = 2;
  beta.degree = 0;
  EXPECT_EQ(stokes_check(nc, beta, q), 0.0);
  beta.add(random_poly(4, 4, rng) + Polynomial::variable(4, 2) * Polynomial::variable(4, 0), {});
  EXPECT_LT(stokes_check(nc, beta, q), 1e-10);
  int vertex_cell = -1;
  for (int i = 0; i < static_cast<int>(nc.cells.size()); ++i)
    if (nc.cells[i].base_dim == 0) vertex_cell = i;
  EXPECT_GT(stokes_check(flip_cell(nc, vertex_cell), beta, q), 1e-3);
}

TEST(Stokes, RandomExactFormsOnCorpus) {
  std::mt19937_64 rng(22);
  QuadratureRule q{16, 1e-8};
  for (const auto& p : corpus()) {
    const int n = p.ambient_dim();
    auto nc = normal_cycle(p);
    auto cc = characteristic_cycle(p);
    for (int t = 0; t < 3; ++t) {
      if (n >= 2) {
        auto beta = random_form(Ambient::N, n, n - 2, rng, Polynomial::constant(2 * n, 1));
        EXPECT_LT(stokes_check(nc, beta, q), 1e-8);
      }
      auto gamma = random_form(Ambient::CC, n, n - 1, rng, fiber_cutoff(n, 2, 3));
      gamma.fiber_radius = Rational(2);
      EXPECT_LT(stokes_check(cc, gamma, q), 1e-8);
    }
  }
}

TEST(Stokes, FlippedCellBreaksClosedness) {
  std::mt19937_64 rng(23);
  Polytope cube = unit_cube(3);
  auto cc = characteristic_cycle(cube);
  auto gamma = random_form(Ambient::CC, 3, 2, rng, fiber_cutoff(3, 2, 3));
  gamma.fiber_radius = Rational(2);
  EXPECT_LT(stokes_check(cc, gamma, {}), 1e-8);
  double worst = 0;
  for (int i = 0; i < static_cast<int>(cc.cells.size()); ++i)
    if (cc.cells[i].base_dim == 0) worst = std::max(worst, stokes_check(flip_cell(cc, i), gamma, {}));
  EXPECT_GT(worst, 1e-3);
}
