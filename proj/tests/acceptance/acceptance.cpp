#include "polyval/angles.hpp"
#include "polyval/corpus.hpp"
#include "polyval/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

using namespace polyval;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

SubdivisionPtr share(Subdivision d) { return std::make_shared<const Subdivision>(std::move(d)); }

GeneratorTable random_complex(const Subdivision& d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  GeneratorTable m;
  for (int i = 0; i < d.size(); ++i) m[i] = MeasureValue(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
  return m;
}

std::vector<Polytope> polytope_corpus() {
  std::vector<Polytope> out;
  std::mt19937_64 rng(2024);
  out.push_back(Polytope::hull({{Rational(0)}, {Rational(3, 2)}}));
  out.push_back(unit_cube(2));
  out.push_back(standard_simplex(2));
  out.push_back(Polytope::hull({{Rational(0), Rational(0)}, {Rational(2), Rational(1)}}));
  out.push_back(random_hull(2, 7, rng, 3));
  out.push_back(unit_cube(3));
  out.push_back(standard_simplex(3));
  out.push_back(random_hull(3, 8, rng, 3));
  out.push_back(Polytope::hull({{Rational(0), Rational(0), Rational(0)}, {Rational(1), Rational(2), Rational(0)},
                                {Rational(0), Rational(1), Rational(1)}}));
  return out;
}

Outcome criterion1() {
  std::mt19937_64 rng(1);
  long evaluations = 0;
  for (int t = 0; t < 200; ++t) {
    auto d = share(to_subdivision(random_triangulation(2 + t % 2, 30, rng)));
    Measure mu = extend(d, random_complex(*d, rng));
    std::vector<int> pick;
    for (int i = 0; i < d->size(); ++i)
      if (std::bernoulli_distribution(0.3)(rng)) pick.push_back(i);
    if (pick.empty()) pick.push_back(0);
    ComplexSet x(d, pick);
    const MeasureValue ref = evaluate(mu, x);
    for (int k = 0; k < 5; ++k) {
      ++evaluations;
      if (!(evaluate_in_order(mu, x, rng()) == ref))
        return {false, "triangulation " + std::to_string(t) + ": presentation order " + std::to_string(k) + " differs"};
    }
    auto fine = share(cone_triangulate(*d));
    Measure nu = extend(fine, induced_generators(mu, *fine), false);
    ++evaluations;
    if (!(evaluate(nu, transport(x, fine)) == ref))
      return {false, "triangulation " + std::to_string(t) + ": refinement round-trip differs"};
  }
  return {true, "200 triangulations, " + std::to_string(evaluations) + " exact re-evaluations agree"};
}

std::vector<SubdivisionPtr> small_subdivisions() {
  std::vector<SubdivisionPtr> out;
  for (const auto& p : polytope_corpus()) {
    Subdivision d = face_subdivision(p);
    if (d.size() <= 12) out.push_back(share(std::move(d)));
  }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40 && out.size() < 24; ++t) {
    Subdivision d = to_subdivision(random_triangulation(2, 2 + t % 2, rng));
    if (d.size() <= 12) out.push_back(share(std::move(d)));
  }
  return out;
}

Outcome criterion2() {
  std::mt19937_64 rng(3);
  long pairs = 0;
  auto subs = small_subdivisions();
  for (const auto& d : subs) {
    Measure mu = extend(d, random_complex(*d, rng));
    const auto w = atom_weights(mu);
    auto oracle = [&](const Bits& closure) {
      MeasureValue s;
      for (auto i = closure.find_first(); i != Bits::npos; i = closure.find_next(i)) s += w[i];
      return s;
    };
    std::set<Bits> closures;
    const int m = d->size();
    for (long mask = 1; mask < (1L << m); ++mask) {
      std::vector<int> members;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) members.push_back(i);
      closures.insert(down_closure(*d, members));
    }
    std::vector<ComplexSet> sets;
    for (const auto& c : closures) sets.push_back(ComplexSet::from_closure(d, c));
    for (const auto& a : sets) {
      if (!(evaluate(mu, a) == oracle(a.closure()))) return {false, "atom oracle disagrees"};
      for (const auto& b : sets) {
        ComplexSet u = a.unite(b), i = a.meet(b);
        MeasureValue vi = i.empty() ? MeasureValue() : evaluate(mu, i);
        ++pairs;
        if (!(evaluate(mu, u) + vi == evaluate(mu, a) + evaluate(mu, b))) return {false, "inclusion-exclusion fails"};
      }
    }
  }
  return {true, std::to_string(subs.size()) + " subdivisions, " + std::to_string(pairs) + " pairs exact"};
}

Outcome criterion3() {
  std::mt19937_64 rng(4);
  auto chi = [](const Polytope&) { return MeasureValue(1); };
  int nonconvex = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 2;
    SimplicialComplex full = t % 5 == 4 ? kuhn_grid(n, n == 2 ? 3 : 2) : random_triangulation(n, 14, rng);
    SimplicialComplex part = random_subcomplex(full, 0.6, rng);
    if (t % 5 == 4 && n == 2) {
      part.top.clear();
      for (const auto& s : full.top) {
        bool center = true;
        for (int v : s) center = center && full.points[v][0] >= 1 && full.points[v][0] <= 2 && full.points[v][1] >= 1 &&
                                 full.points[v][1] <= 2;
        if (!center) part.top.push_back(s);
      }
    }
    if (part.top.size() < full.top.size()) ++nonconvex;
    auto d = share(to_subdivision(full));
    std::vector<int> members;
    for (const auto& c : part.cells()) members.push_back(d->index_of(c));
    Vec lo = full.points[0], hi = full.points[0];
    for (const auto& p : full.points)
      for (int i = 0; i < n; ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    const Rational mid = (lo[0] + hi[0]) / 2, pad = (hi[0] - lo[0]) / 5 + 1;
    LocalValuationCover cover;
    Vec a_lo = lo, a_hi = hi, b_lo = lo, b_hi = hi;
    for (int i = 0; i < n; ++i) {
      a_lo[i] -= 1;
      b_lo[i] -= 1;
      a_hi[i] += 1;
      b_hi[i] += 1;
    }
    a_hi[0] = mid + pad / 3;
    b_lo[0] = mid - pad / 3;
    cover.boxes = {{a_lo, a_hi}, {b_lo, b_hi}};
    cover.evaluators = {chi, chi};
    GlueOptions opt;
    opt.perturb.seed = rng();
    const MeasureValue got = glue(cover, ComplexSet(d, members), opt);
    if (!(got == MeasureValue(part.euler_characteristic())))
      return {false, "complex " + std::to_string(t) + ": glue " + sci(got.value().real()) + " vs V-E+F " +
                         std::to_string(part.euler_characteristic())};
  }
  return {true, "50 complexes (" + std::to_string(nonconvex) + " non-convex) match V - E + F exactly"};
}

Outcome criterion4() {
  double worst2 = 0, worst3 = 0, worst_form = 0;
  for (const auto& p : polytope_corpus()) {
    double s = 0;
    for (int v : p.faces_of_dim(0)) s += external_angle_value(p, v);
    (p.ambient_dim() <= 2 ? worst2 : worst3) = std::max(p.ambient_dim() <= 2 ? worst2 : worst3, std::abs(s - 1));
    const int n = p.ambient_dim();
    worst_form = std::max(worst_form, std::abs(integrate(normal_cycle(p), lipschitz_killing_form(n, 0), {}).real() - 1));
  }
  const bool ok = worst2 <= 1e-12 && worst3 <= 1e-4 && worst_form <= 1e-6;
  return {ok, "angle sums: n<=2 " + sci(worst2) + " (tol 1e-12), n=3 " + sci(worst3) + " (tol 1e-4); N(P) integral " +
                  sci(worst_form) + " (tol 1e-6)"};
}

Outcome criterion5() {
  Polytope cube = unit_cube(3);
  const double expect[] = {1, 3, 3, 1};
  double iv = 0;
  for (int k = 0; k <= 3; ++k) iv = std::max(iv, std::abs(intrinsic_volume(cube, k) - expect[k]));
  std::mt19937_64 rng(5);
  std::vector<Polytope> bodies{cube, standard_simplex(3), random_hull(3, 8, rng, 3)};
  double worst = 0;
  std::uint64_t seed = 11;
  for (const auto& p : bodies)
    for (double eps : {0.1, 0.5}) {
      const double exact = steiner_volume(p, eps);
      const auto mc = steiner_monte_carlo(p, eps, 10000000, seed++);
      worst = std::max(worst, std::abs(mc.value - exact) / exact);
    }
  const bool ok = iv <= 1e-12 && worst <= 5e-3;
  return {ok, "cube (V0..V3) error " + sci(iv) + "; Steiner vs Monte Carlo (1e7 samples) worst relative " + sci(worst) +
                  " (tol 5e-3)"};
}

Vec probe_point(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-3, 3);
  Vec x(n);
  for (auto& v : x) v = Rational(num(rng), 4);
  return x;
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  const QuadratureRule q{12, 1e-8};
  double worst_fit = 0, worst_hom = 0;
  int fits = 0;
  for (int v = 0; v < 30; ++v) {
    const int n = 2 + v % 2;
    Valuation phi = Valuation::from_cc_form(random_level_form(n, 0, rng));
    for (int pr = 0; pr < 10; ++pr) {
      Polytope k = random_hull(n, n + 2, rng, 2);
      Vec x = probe_point(n, rng);
      McMullenFit a, b;
      try {
        a = mcmullen_decompose(phi, k, x, default_samples(), q, 1.0);
      } catch (const NotPolynomial& e) {
        return {false, "fit rejected, residual " + sci(e.residual)};
      }
      ++fits;
      worst_fit = std::max(worst_fit, a.residual / std::max(a.scale, 1e-300));
      if (pr < 2) {
        b = mcmullen_decompose(phi, affine_image(k, 2, scale(x, Rational(-1))), x, default_samples(), q, 1.0);
        for (int j = 0; j <= n; ++j)
          worst_hom = std::max(worst_hom, std::abs(b.coefficients[j] - std::pow(2.0, j) * a.coefficients[j]) /
                                              std::max(1.0, std::abs(b.coefficients[j])));
      }
    }
  }
  const bool ok = worst_fit <= 1e-7 && worst_hom <= 1e-6;
  return {ok, std::to_string(fits) + " fits, worst residual/scale " + sci(worst_fit) +
                  " (tol 1e-7); homogeneity worst relative " + sci(worst_hom) + " (tol 1e-6, 60 probe pairs)"};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  const QuadratureRule q{12, 1e-8};
  std::vector<Probe> probes;
  for (int i = 0; i < 50; ++i) probes.push_back({random_hull(3, 5, rng, 2), probe_point(3, rng)});
  std::ostringstream detail;
  bool ok = true;
  for (int level = 0; level <= 3; ++level) {
    FiltrationDegree d = filtration_degree(Valuation::from_cc_form(random_level_form(3, level, rng)), probes, 1e-8, q);
    ok = ok && d.degree >= level && d.degree <= 3;
    detail << "level " << level << " -> " << d.degree << "; ";
  }
  std::vector<Probe> few(probes.begin(), probes.begin() + 10);
  FiltrationDegree vol = filtration_degree(intrinsic_volume_valuation(3, 3), few, 1e-8, q);
  FiltrationDegree chi = filtration_degree(intrinsic_volume_valuation(3, 0), few, 1e-8, q);
  ok = ok && vol.degree == 3 && !vol.zero && chi.degree == 0;
  detail << "volume -> " << vol.degree << ", chi -> " << chi.degree << " (50 probes; 10 for volume and chi)";
  return {ok, detail.str()};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  const QuadratureRule q{16, 1e-8};
  std::vector<Polytope> bodies{unit_cube(1), unit_cube(2), standard_simplex(2),
                               Polytope::hull({{Rational(0), Rational(0)}, {Rational(2), Rational(1)}})};
  bool sigma_ok = true;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const Polytope& p = bodies[t % bodies.size()];
    DifferentialForm w = random_bump_form(p.ambient_dim(), rng);
    DifferentialForm twice = euler_verdier(euler_verdier(w));
    sigma_ok = sigma_ok && twice.terms.size() == w.terms.size();
    for (std::size_t i = 0; sigma_ok && i < w.terms.size(); ++i)
      sigma_ok = twice.terms[i].coef.polynomial() == w.terms[i].coef.polynomial() &&
                 twice.terms[i].wedge == w.terms[i].wedge && twice.terms[i].scale == w.terms[i].scale;
    worst = std::max(worst, verdier_identity_check(p, w, q).residual);
  }
  double worst_sign = 0;
  for (int t = 0; t < 6; ++t) {
    const int n = 2 + t % 2;
    Valuation phi = Valuation::from_cc_form(random_level_form(n, 0, rng));
    Polytope k = random_hull(n, n + 2, rng, 2);
    Vec x = zeros(n);
    auto a = mcmullen_decompose(euler_verdier(phi), k, x, default_samples(), {12}, 1.0);
    auto b = mcmullen_decompose(phi, negate(k), x, default_samples(), {12}, 1.0);
    for (int j = 0; j <= n; ++j)
      worst_sign = std::max(worst_sign, std::abs(a.coefficients[j] - (j % 2 ? -1.0 : 1.0) * b.coefficients[j]) /
                                            std::max(1.0, a.scale));
  }
  const bool ok = sigma_ok && worst <= 1e-8 && worst_sign <= 1e-6;
  return {ok, std::string("sigma^2 = id ") + (sigma_ok ? "exact" : "VIOLATED") + "; Verdier identity worst " + sci(worst) +
                  " (tol 1e-8, 20 forms); graded sign law worst " + sci(worst_sign) + " (tol 1e-6)"};
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  const QuadratureRule q{16, 1e-8};
  double worst = 0, weakest_control = 1e300;
  long forms = 0;
  for (const auto& p : polytope_corpus()) {
    const int n = p.ambient_dim();
    CycleChain nc = normal_cycle(p), cc = characteristic_cycle(p);
    for (int t = 0; t < 20; ++t) {
      DifferentialForm g = random_form(Ambient::CC, n, n - 1, rng, fiber_cutoff(n, 2, 3));
      g.fiber_radius = Rational(2);
      worst = std::max(worst, stokes_check(cc, g, q));
      ++forms;
      if (n >= 2) {
        worst = std::max(worst, stokes_check(nc, random_form(Ambient::N, n, n - 2, rng, Polynomial::constant(2 * n, 1)), q));
        ++forms;
      }
    }
    DifferentialForm g = random_form(Ambient::CC, n, n - 1, rng, fiber_cutoff(n, 2, 3));
    std::vector<int> vertical(n - 1);
    for (int i = 0; i < n - 1; ++i) vertical[i] = n + 1 + i;
    g.add((Polynomial::constant(2 * n, 1) + Polynomial::variable(2 * n, 0)) * fiber_cutoff(n, 2, 3), vertical);
    g.fiber_radius = Rational(2);
    double control = 0;
    for (int i = 0; i < static_cast<int>(cc.cells.size()); ++i)
      if (cc.cells[i].base_dim == 0) control = std::max(control, stokes_check(flip_cell(cc, i), g, q));
    weakest_control = std::min(weakest_control, control);
  }
  const bool ok = worst <= 1e-8 && weakest_control > 1e-3;
  return {ok, std::to_string(forms) + " exact forms, worst residual " + sci(worst) +
                  " (tol 1e-8); flipped control minimum " + sci(weakest_control) + " (> 1e-3)"};
}

Outcome criterion10(const std::string& csv_dir) {
  std::ostringstream detail;
  bool ok = true;
  for (int k : {1, 2}) {
    auto rows = convergence_experiment("disk", {8, 16, 32, 64, 128}, k);
    const double order = empirical_order(rows);
    ok = ok && order >= 1.9;
    detail << "k=" << k << " order " << order << "; ";
    write_text(csv_dir + "/converge_disk_k" + std::to_string(k) + ".csv", convergence_csv(rows));
  }
  detail << "CSV in " << csv_dir;
  return {ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string csv_dir = argc > 1 ? argv[1] : ".";
  struct Item {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  std::vector<Item> items{
      {1, "measure-extension uniqueness", 30, criterion1},
      {2, "full additivity", 30, criterion2},
      {3, "Euler characteristic by gluing", 20, criterion3},
      {4, "Gauss-map degree / angle sum", 60, criterion4},
      {5, "intrinsic volumes and Steiner formula", 180, criterion5},
      {6, "McMullen polynomiality", 120, criterion6},
      {7, "filtration", 120, criterion7},
      {8, "Euler-Verdier", 120, criterion8},
      {9, "Stokes / cycle closedness", 60, criterion9},
      {10, "convergence surrogate", 30, [&] { return criterion10(csv_dir); }},
  };
  int failures = 0;
  for (const auto& it : items) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = s <= it.budget;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::ostringstream t;
    t.precision(3);
    t << s;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << it.id << " (" << it.name << "): " << o.detail << " ["
              << t.str() << " s of " << it.budget << " s" << (in_time ? "" : ", over budget") << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
