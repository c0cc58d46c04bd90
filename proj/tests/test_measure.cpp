#include "polyval/corpus.hpp"
#include "polyval/measure.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace polyval;

namespace {

Vec V(std::initializer_list<long> xs) {
  Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Polytope H(std::initializer_list<Vec> pts) { return Polytope::hull(std::vector<Vec>(pts)); }

SubdivisionPtr share(Subdivision d) { return std::make_shared<const Subdivision>(std::move(d)); }

SubdivisionPtr split_segment() {
  Vec h{Rational(1, 2)};
  return share(Subdivision({H({V({0}), V({1})})},
                           {H({V({0}), h}), H({h, V({1})}), H({V({0})}), H({h}), H({V({1})})}));
}

GeneratorTable constant(const Subdivision& d, MeasureValue v) {
  GeneratorTable m;
  for (int i = 0; i < d.size(); ++i) m[i] = v;
  return m;
}

GeneratorTable random_complex(const Subdivision& d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> x(-20, 20);
  GeneratorTable m;
  for (int i = 0; i < d.size(); ++i) m[i] = MeasureValue(Rational(x(rng), 7), Rational(x(rng), 3));
  return m;
}

// Square cut into four triangles around its center.
SubdivisionPtr fan_square() {
  SimplicialComplex c;
  c.points = {V({0, 0}), V({1, 0}), V({1, 1}), V({0, 1}), Vec{Rational(1, 2), Rational(1, 2)}};
  c.top = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3, 4}};
  return share(to_subdivision(c));
}

MeasureValue atom_oracle(const Measure& mu, const Bits& closure) {
  auto w = atom_weights(mu);
  MeasureValue s;
  for (auto i = closure.find_first(); i != Bits::npos; i = closure.find_next(i)) s += w[i];
  return s;
}

std::vector<Bits> all_unions(const Subdivision& d) {
  std::set<Bits> fam;
  const int m = d.size();
  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<int> s;
    for (int j = 0; j < m; ++j)
      if (mask & (1L << j)) s.push_back(j);
    fam.insert(down_closure(d, s));
  }
  return {fam.begin(), fam.end()};
}

MeasureValue area(const Polytope& p) {
  if (p.dim() < 2) return MeasureValue(0);
  return MeasureValue(p.chart_volume({0, 1}));
}

}  // namespace

TEST(Extend, SplitSegmentUnitGenerators) {
  auto d = split_segment();
  Measure mu = extend(d, constant(*d, MeasureValue(1)));
  EXPECT_EQ(evaluate(mu, ComplexSet(d, {0, 1})), MeasureValue(1));
  EXPECT_EQ(evaluate_presentation(mu, {0, 1}), MeasureValue(1));
}

TEST(Extend, LengthGeneratorsGiveLebesgue) {
  auto d = split_segment();
  GeneratorTable m;
  for (int i = 0; i < d->size(); ++i) m[i] = MeasureValue(d->cell(i).dim() == 1 ? d->cell(i).chart_volume({0}) : Rational(0));
  Measure mu = extend(d, m);
  for (const auto& s : all_unions(*d)) {
    Rational len = 0;
    for (auto i = s.find_first(); i != Bits::npos; i = s.find_next(i))
      if (d->cell(static_cast<int>(i)).dim() == 1) len += d->cell(static_cast<int>(i)).chart_volume({0});
    EXPECT_EQ(mu.value(s), MeasureValue(len));
  }
}

TEST(Extend, FanSquareEulerCharacteristic) {
  auto d = fan_square();
  Measure mu = extend(d, constant(*d, MeasureValue(1)));
  std::vector<int> tris, boundary;
  for (int i = 0; i < d->size(); ++i) {
    if (d->cell(i).dim() == 2) tris.push_back(i);
    if (d->cell(i).dim() == 1) {
      const Polytope& e = d->cell(i);
      bool on_boundary = true;
      for (const auto& v : e.vertices()) on_boundary = on_boundary && !(v[0] == Rational(1, 2) && v[1] == Rational(1, 2));
      if (on_boundary) boundary.push_back(i);
    }
  }
  EXPECT_EQ(evaluate(mu, ComplexSet(d, tris)), MeasureValue(1));
  ASSERT_EQ(boundary.size(), 4u);
  EXPECT_EQ(evaluate(mu, ComplexSet(d, boundary)), MeasureValue(0));
}

TEST(Evaluate, GeneratorCellAndEmptySet) {
  std::mt19937_64 rng(1);
  auto d = fan_square();
  Measure mu = extend(d, random_complex(*d, rng));
  for (int i = 0; i < d->size(); ++i) EXPECT_EQ(evaluate(mu, ComplexSet(d, {i})), mu.generators().at(i));
  EXPECT_EQ(evaluate(mu, ComplexSet(d, {})), MeasureValue(0));
}

TEST(Evaluate, FullAdditivityTableSixCells) {
  std::mt19937_64 rng(2);
  auto d = share(Subdivision({H({V({0}), V({1})}), H({V({2}), V({3})})},
                             {H({V({0}), V({1})}), H({V({2}), V({3})}), H({V({0})}), H({V({1})}), H({V({2})}), H({V({3})})}));
  ASSERT_EQ(d->size(), 6);
  Measure mu = extend(d, random_complex(*d, rng));
  auto fam = all_unions(*d);
  for (const auto& a : fam) {
    EXPECT_EQ(mu.value(a), atom_oracle(mu, a));
    for (const auto& b : fam) EXPECT_EQ(mu.value(a | b) + mu.value(a & b), mu.value(a) + mu.value(b));
  }
}

TEST(Evaluate, AdditivityOnSmallTriangulations) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 4; ++t) {
    auto d = share(to_subdivision(random_triangulation(2, 12, rng)));
    Measure mu = extend(d, random_complex(*d, rng));
    auto fam = all_unions(*d);
    for (const auto& a : fam) {
      ASSERT_EQ(mu.value(a), atom_oracle(mu, a));
      for (const auto& b : fam) ASSERT_EQ(mu.value(a | b) + mu.value(a & b), mu.value(a) + mu.value(b));
    }
  }
}

TEST(Uniqueness, PresentationsAndOrders) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    auto d = share(to_subdivision(random_triangulation(2 + t % 2, 30, rng)));
    Measure mu = extend(d, random_complex(*d, rng));
    std::vector<int> pick;
    for (int i = 0; i < d->size(); ++i)
      if (std::bernoulli_distribution(0.3)(rng)) pick.push_back(i);
    ComplexSet x(d, pick);
    MeasureValue ref = evaluate(mu, x);
    EXPECT_EQ(ref, atom_oracle(mu, x.closure()));
    for (int k = 0; k < 5; ++k) {
      auto pres = x.reduced();
      for (auto i = x.closure().find_first(); i != Bits::npos; i = x.closure().find_next(i))
        if (std::bernoulli_distribution(0.25)(rng) && pres.size() < 20) pres.push_back(static_cast<int>(i));
      std::shuffle(pres.begin(), pres.end(), rng);
      EXPECT_EQ(evaluate_presentation(mu, pres), ref);
      EXPECT_EQ(evaluate_in_order(mu, x, 100 + k), ref);
    }
  }
}

TEST(Refinement, InducedGeneratorsReproduceCoarseMeasure) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 4; ++t) {
    auto d = share(to_subdivision(random_triangulation(2 + t % 2, 18, rng)));
    Measure mu = extend(d, random_complex(*d, rng));
    auto fine = share(cone_triangulate(*d));
    Measure nu = extend(fine, induced_generators(mu, *fine), false);
    for (int k = 0; k < 20; ++k) {
      std::vector<int> pick;
      for (int i = 0; i < d->size(); ++i)
        if (std::bernoulli_distribution(0.3)(rng)) pick.push_back(i);
      ComplexSet x(d, pick);
      EXPECT_EQ(evaluate(nu, transport(x, fine)), evaluate(mu, x));
    }
  }
}

TEST(Valuation, ConvexUnionsOfCells) {
  std::mt19937_64 rng(6);
  auto d = share(to_subdivision(kuhn_grid(2, 2)));
  Measure mu = extend(d, random_complex(*d, rng));
  int checked = 0;
  for (int i = 0; i < d->size(); ++i)
    for (int j = 0; j < d->size(); ++j) {
      if (d->cell(i).dim() != 2 || d->cell(j).dim() != 2 || i == j) continue;
      std::vector<Vec> pts = d->cell(i).vertices();
      pts.insert(pts.end(), d->cell(j).vertices().begin(), d->cell(j).vertices().end());
      Polytope hull = Polytope::hull(pts);
      if (hull.chart_volume({0, 1}) != d->cell(i).chart_volume({0, 1}) + d->cell(j).chart_volume({0, 1})) continue;
      ComplexSet a(d, {i}), b(d, {j});
      EXPECT_EQ(evaluate(mu, a.unite(b)) + evaluate(mu, a.meet(b)), evaluate(mu, a) + evaluate(mu, b));
      ++checked;
    }
  EXPECT_GT(checked, 0);
}

TEST(Vanishing, ZeroGeneratorsGiveZero) {
  std::mt19937_64 rng(7);
  auto d = share(to_subdivision(random_triangulation(2, 12, rng)));
  Measure mu = extend(d, constant(*d, MeasureValue(0)));
  for (const auto& s : all_unions(*d)) EXPECT_EQ(mu.value(s), MeasureValue(0));
}

TEST(Assumptions, MissingSharedEdgeIsReported) {
  Polytope a = H({V({0, 0}), V({1, 0}), V({0, 1})});
  Polytope b = H({V({1, 1}), V({1, 0}), V({0, 1})});
  auto d = share(Subdivision({unit_cube(2)}, {a, b, H({V({1, 0})}), H({V({0, 1})})}));
  EXPECT_THROW(extend(d, constant(*d, MeasureValue(1))), AssumptionViolation);
  EXPECT_NO_THROW(extend(d, constant(*d, MeasureValue(1)), false));
}

TEST(Assumptions, SameTypeOverlapIsReported) {
  Polytope a = H({V({0, 0}), V({2, 0}), V({0, 2})});
  Polytope b = H({V({0, 0}), V({1, 0}), V({0, 1})});
  auto d = share(Subdivision({a}, {a, b}));
  EXPECT_THROW(extend(d, constant(*d, MeasureValue(1))), AssumptionViolation);
}

TEST(Glue, AreaAcrossTwoBoxesForFiveSeeds) {
  Polytope sq = unit_cube(2);
  LocalValuationCover cover;
  cover.boxes = {{Vec{Rational(-1, 10), Rational(-1, 10)}, Vec{Rational(6, 10), Rational(11, 10)}},
                 {Vec{Rational(4, 10), Rational(-1, 10)}, Vec{Rational(11, 10), Rational(11, 10)}}};
  cover.evaluators = {area, area};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GlueOptions opt;
    opt.perturb.seed = seed;
    EXPECT_EQ(glue(cover, sq, opt), MeasureValue(1));
  }
}

TEST(Glue, EulerCharacteristic) {
  Polytope sq = unit_cube(2);
  LocalValuationCover cover;
  cover.boxes = {{Vec{Rational(-1, 10), Rational(-1, 10)}, Vec{Rational(6, 10), Rational(11, 10)}},
                 {Vec{Rational(4, 10), Rational(-1, 10)}, Vec{Rational(11, 10), Rational(11, 10)}}};
  auto chi = [](const Polytope&) { return MeasureValue(1); };
  cover.evaluators = {chi, chi};
  EXPECT_EQ(glue(cover, sq), MeasureValue(1));
}

TEST(Glue, AnnulusEulerCharacteristicIsZero) {
  auto full = kuhn_grid(2, 3);
  SimplicialComplex ring = full;
  ring.top.clear();
  for (const auto& t : full.top) {
    bool center = true;
    for (int v : t) {
      const Vec& p = full.points[v];
      center = center && p[0] >= 1 && p[0] <= 2 && p[1] >= 1 && p[1] <= 2;
    }
    if (!center) ring.top.push_back(t);
  }
  ASSERT_EQ(ring.euler_characteristic(), 0);
  auto d = share(to_subdivision(full));
  std::vector<int> members;
  for (const auto& c : ring.cells()) members.push_back(d->index_of(c));
  LocalValuationCover cover;
  cover.boxes = {{V({-1, -1}), Vec{Rational(17, 10), 4}}, {Vec{Rational(13, 10), -1}, V({4, 4})}};
  auto chi = [](const Polytope&) { return MeasureValue(1); };
  cover.evaluators = {chi, chi};
  EXPECT_EQ(glue(cover, ComplexSet(d, members)), MeasureValue(ring.euler_characteristic()));
}

TEST(Glue, MismatchedEvaluatorsAreRejected) {
  Polytope sq = unit_cube(2);
  LocalValuationCover cover;
  cover.boxes = {{Vec{Rational(-1, 10), Rational(-1, 10)}, Vec{Rational(6, 10), Rational(11, 10)}},
                 {Vec{Rational(4, 10), Rational(-1, 10)}, Vec{Rational(11, 10), Rational(11, 10)}}};
  cover.evaluators = {area, [](const Polytope& p) { return area(p) * MeasureValue(2); }};
  try {
    glue(cover, sq);
    FAIL() << "expected OverlapIncompatible";
  } catch (const OverlapIncompatible& e) {
    EXPECT_EQ(e.second, e.first * MeasureValue(2));
    EXPECT_TRUE(cover.boxes[0].contains(e.cell) && cover.boxes[1].contains(e.cell));
  }
}

TEST(Glue, InsufficientCover) {
  LocalValuationCover cover;
  cover.boxes = {{V({-1, -1}), Vec{Rational(1, 2), 2}}};
  cover.evaluators = {area};
  EXPECT_THROW(glue(cover, unit_cube(2)), CoverError);
}
