#include "polyval/experiments.hpp"

#include "polyval/angles.hpp"
#include "polyval/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace polyval {

Polynomial random_polynomial(int nvars, int degree, std::mt19937_64& rng, int lo, int hi) {
  if (hi < 0) hi = nvars;
  std::uniform_int_distribution<int> coef(-5, 5), var(lo, hi - 1), deg(0, degree);
  Polynomial p(nvars);
  for (int t = 0; t < 5; ++t) {
    Polynomial::Exponent e(nvars, 0);
    const int d = deg(rng);
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
    w.add(random_polynomial(2 * n, 3, rng) * factor, std::vector<int>(all.begin(), all.begin() + degree));
  }
  return w;
}

DifferentialForm random_bump_form(int n, std::mt19937_64& rng) {
  DifferentialForm w = random_form(Ambient::CC, n, n, rng, fiber_cutoff(n, Rational(3, 2), 3));
  w.fiber_radius = Rational(3, 2);
  return w;
}

DifferentialForm random_level_form(int n, int level, std::mt19937_64& rng) {
  DifferentialForm w;
  w.ambient = Ambient::CC;
  w.n = n;
  w.degree = n;
  w.fiber_radius = Rational(2);
  const Polynomial cut = fiber_cutoff(n, 2, 2);
  for (int h = level; h <= n; ++h)
    for (int t = 0; t < 2; ++t) {
      std::vector<int> dx(n), dxi(n);
      std::iota(dx.begin(), dx.end(), 0);
      std::iota(dxi.begin(), dxi.end(), n);
      std::shuffle(dx.begin(), dx.end(), rng);
      std::shuffle(dxi.begin(), dxi.end(), rng);
      std::vector<int> idx(dx.begin(), dx.begin() + h);
      idx.insert(idx.end(), dxi.begin(), dxi.begin() + (n - h));
      Polynomial c = random_polynomial(2 * n, 2, rng, n, 2 * n);
      if (c.is_zero()) c = Polynomial::constant(2 * n, 1);
      w.add(c * cut, idx);
    }
  return w;
}

// Convergence experiment.

namespace {

constexpr long long kDenominator = 1000000000LL;

std::vector<std::array<double, 3>> icosahedron() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<std::array<double, 3>> v;
  for (double a : {-1.0, 1.0})
    for (double b : {-phi, phi}) {
      v.push_back({0, a, b});
      v.push_back({a, b, 0});
      v.push_back({b, 0, a});
    }
  return v;
}

}  // namespace

Polytope approximating_polytope(const std::string& body, int m) {
  std::vector<Vec> pts;
  if (body == "disk") {
    if (m < 3) throw std::invalid_argument("disk approximant needs m >= 3");
    for (int j = 0; j < m; ++j) {
      const double a = 2 * std::numbers::pi * j / m;
      pts.push_back({approximate(std::cos(a), kDenominator), approximate(std::sin(a), kDenominator)});
    }
    return Polytope::hull(pts);
  }
  if (body == "ball") {
    if (m < 1) throw std::invalid_argument("ball approximant needs frequency >= 1");
    auto v = icosahedron();
    std::map<std::array<long long, 3>, bool> seen;
    auto dist2 = [](const auto& a, const auto& b) {
      double s = 0;
      for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      return s;
    };
    const int nv = static_cast<int>(v.size());
    for (int a = 0; a < nv; ++a)
      for (int b = a + 1; b < nv; ++b)
        for (int c = b + 1; c < nv; ++c) {
          if (std::abs(dist2(v[a], v[b]) - 4) > 1e-9 || std::abs(dist2(v[a], v[c]) - 4) > 1e-9 ||
              std::abs(dist2(v[b], v[c]) - 4) > 1e-9)
            continue;
          for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j) {
              const int k = m - i - j;
              std::array<double, 3> p{};
              for (int d = 0; d < 3; ++d) p[d] = (i * v[a][d] + j * v[b][d] + k * v[c][d]) / m;
              const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
              std::array<long long, 3> key{};
              for (int d = 0; d < 3; ++d) {
                p[d] /= len;
                key[d] = std::llround(p[d] * 1e9);
              }
              if (seen.emplace(key, true).second)
                pts.push_back({approximate(p[0], kDenominator), approximate(p[1], kDenominator),
                               approximate(p[2], kDenominator)});
            }
        }
    return Polytope::hull(pts);
  }
  throw std::invalid_argument("unsupported body \"" + body + "\" (expected disk or ball)");
}

double limit_intrinsic_volume(const std::string& body, int k) {
  if (body == "disk") {
    const double v[] = {1, std::numbers::pi, std::numbers::pi};
    if (k < 0 || k > 2) throw std::invalid_argument("disk: k must be in 0..2");
    return v[k];
  }
  if (body == "ball") {
    const double v[] = {1, 4, 2 * std::numbers::pi, 4 * std::numbers::pi / 3};
    if (k < 0 || k > 3) throw std::invalid_argument("ball: k must be in 0..3");
    return v[k];
  }
  throw std::invalid_argument("unsupported body \"" + body + "\" (expected disk or ball)");
}

std::vector<ConvergenceRow> convergence_experiment(const std::string& body, const std::vector<int>& m_list, int k) {
  const double limit = limit_intrinsic_volume(body, k);
  if (!std::is_sorted(m_list.begin(), m_list.end()) ||
      std::adjacent_find(m_list.begin(), m_list.end()) != m_list.end())
    throw std::invalid_argument("m_list must be strictly increasing");
  std::vector<ConvergenceRow> rows;
  for (int m : m_list) {
    ConvergenceRow r;
    r.m = m;
    r.value = intrinsic_volume(approximating_polytope(body, m), k);
    r.error = std::abs(r.value - limit);
    rows.push_back(r);
  }
  return rows;
}

double empirical_order(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows)
    if (r.error > 0) {
      xs.push_back(std::log(static_cast<double>(r.m)));
      ys.push_back(-std::log(r.error));
    }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream s;
  s.precision(17);
  s << "m,value,error\n";
  for (const auto& r : rows) s << r.m << ',' << r.value << ',' << r.error << '\n';
  return s.str();
}

// Property suite.

SuiteConfig SuiteConfig::defaults() {
  SuiteConfig c;
  c.corpus = {"segment:1", "cube:2", "simplex:2", "segment:2", "hull:2:7:3", "cube:3", "simplex:3", "hull:3:8:5"};
  return c;
}

SuiteConfig SuiteConfig::from_json(const Json& j) {
  SuiteConfig c = defaults();
  if (j.contains("corpus")) {
    c.corpus.clear();
    for (const auto& e : j["corpus"]) c.corpus.push_back(e.get<std::string>());
  }
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("quad_order")) c.quad_order = j["quad_order"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("steiner_samples")) c.steiner_samples = j["steiner_samples"].get<long>();
  if (j.contains("repeats")) c.repeats = j["repeats"].get<int>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("log")) c.log_path = j["log"].get<std::string>();
  return c;
}

bool SuiteReport::passed() const {
  return diagnostics.empty() &&
         std::all_of(families.begin(), families.end(), [](const FamilyResult& f) { return f.passed; });
}

Json SuiteReport::to_json() const {
  Json j;
  j["passed"] = passed();
  j["diagnostics"] = diagnostics;
  j["families"] = Json::array();
  for (const auto& f : families) {
    std::ostringstream r, t;
    r.precision(6);
    t.precision(6);
    r << std::scientific << f.residual;
    t << std::scientific << f.tolerance;
    j["families"].push_back({{"name", f.name},
                             {"kind", f.exact ? "exact" : "approximate"},
                             {"passed", f.passed},
                             {"cases", f.cases},
                             {"failures", f.failures},
                             {"worst_residual", r.str()},
                             {"tolerance", t.str()},
                             {"messages", f.messages}});
  }
  return j;
}

namespace {

struct Entry {
  std::string label;
  Polytope body;
};

Polytope segment(int n) {
  Vec a = zeros(n), b = zeros(n);
  for (int i = 0; i < n; ++i) b[i] = Rational(i + 1, 1 + i % 2);
  return Polytope::hull({a, b});
}

Polytope corpus_entry(const std::string& label) {
  std::vector<std::string> parts;
  std::stringstream s(label);
  std::string item;
  while (std::getline(s, item, ':')) parts.push_back(item);
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw FormatError(label + ": missing parameter");
    try {
      return std::stoi(parts[i]);
    } catch (const std::logic_error&) {
      throw FormatError(label + ": bad parameter \"" + parts[i] + "\"");
    }
  };
  auto dim = [&](std::size_t i) {
    int n = num(i);
    if (n < 1 || n > 4) throw FormatError(label + ": dimension must be in 1..4");
    return n;
  };
  if (parts.size() >= 2 && parts[0] == "cube") return unit_cube(dim(1));
  if (parts.size() >= 2 && parts[0] == "simplex") return standard_simplex(dim(1));
  if (parts.size() >= 2 && parts[0] == "segment") return segment(dim(1));
  if (parts.size() >= 4 && parts[0] == "hull") {
    std::mt19937_64 rng(num(3));
    return random_hull(dim(1), std::max(1, num(2)), rng, 3);
  }
  return polytope_from_json(read_json_file(label));
}

struct Case {
  double residual = 0;
  bool ok = true;
  std::string message;
};

struct Context {
  const SuiteConfig& config;
  const Entry& entry;
  std::mt19937_64 rng;
  QuadratureRule q;
  double scale;  // tol / 1e-8
};

using Family = std::function<void(Context&, std::vector<Case>&)>;

struct FamilyDef {
  std::string name;
  bool exact;
  double tolerance;  // nominal; approximate families scale it by tol / 1e-8
  Family run;
};

double tolerance_of(const FamilyDef& f, const SuiteConfig& c) { return f.exact ? 0 : f.tolerance * c.tol / 1e-8; }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

GeneratorTable random_exact_generators(const Subdivision& d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  GeneratorTable m;
  for (int i = 0; i < d.size(); ++i) m[i] = MeasureValue(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
  return m;
}

ComplexSet random_union(const SubdivisionPtr& d, std::mt19937_64& rng) {
  std::vector<int> members;
  std::bernoulli_distribution pick(0.4);
  for (int i = 0; i < d->size(); ++i)
    if (pick(rng)) members.push_back(i);
  if (members.empty()) members.push_back(static_cast<int>(rng() % d->size()));
  return ComplexSet(d, members);
}

void exact_case(std::vector<Case>& out, bool ok, const std::string& what) { out.push_back({ok ? 0.0 : 1.0, ok, ok ? "" : what}); }

void approx_case(std::vector<Case>& out, double residual, double tol, const std::string& what) {
  const bool ok = residual <= tol;
  out.push_back({residual, ok, ok ? "" : what + ": residual " + fmt(residual) + " > " + fmt(tol)});
}

std::vector<FamilyDef> families() {
  std::vector<FamilyDef> f;
  f.push_back({"face_lattice_euler_poincare", true, 0, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 long s = 0;
                 for (int k = 0; k <= p.dim(); ++k) s += (k % 2 ? -1 : 1) * static_cast<long>(p.faces_of_dim(k).size());
                 exact_case(out, s == 1, "alternating face count " + std::to_string(s));
               }});
  f.push_back({"subdivision_conditions", true, 0, [](Context& c, std::vector<Case>& out) {
                 Subdivision d = face_subdivision(c.entry.body);
                 exact_case(out, verify_subdivision(d, c.rng()).ok, "face subdivision rejected");
                 Subdivision t = cone_triangulate(d);
                 exact_case(out, verify_subdivision(t, c.rng()).ok, "triangulation rejected");
                 exact_case(out, verify_refinement(t, d, c.rng()).ok, "triangulation is not a refinement");
               }});
  f.push_back({"measure_uniqueness", true, 0, [](Context& c, std::vector<Case>& out) {
                 auto d = std::make_shared<const Subdivision>(face_subdivision(c.entry.body));
                 auto t = std::make_shared<const Subdivision>(cone_triangulate(*d));
                 for (int r = 0; r < c.config.repeats; ++r) {
                   Measure mu = extend(d, random_exact_generators(*d, c.rng));
                   ComplexSet x = random_union(d, c.rng);
                   MeasureValue v = evaluate(mu, x);
                   bool same = true;
                   for (int s = 0; s < 5; ++s) same = same && evaluate_in_order(mu, x, c.rng()) == v;
                   exact_case(out, same, "presentation order changed the value");
                   Measure fine = extend(t, induced_generators(mu, *t));
                   exact_case(out, evaluate(fine, transport(x, t)) == v, "refinement round-trip changed the value");
                 }
               }});
  f.push_back({"full_additivity", true, 0, [](Context& c, std::vector<Case>& out) {
                 auto d = std::make_shared<const Subdivision>(face_subdivision(c.entry.body));
                 Measure mu = extend(d, random_exact_generators(*d, c.rng));
                 auto w = atom_weights(mu);
                 auto oracle = [&](const ComplexSet& x) {
                   MeasureValue s;
                   for (int i = 0; i < d->size(); ++i)
                     if (x.closure()[i]) s += w[i];
                   return s;
                 };
                 for (int r = 0; r < 4 * c.config.repeats; ++r) {
                   ComplexSet a = random_union(d, c.rng), b = random_union(d, c.rng);
                   ComplexSet u = a.unite(b), m = a.meet(b);
                   MeasureValue vm = m.empty() ? MeasureValue() : evaluate(mu, m);
                   exact_case(out, evaluate(mu, u) + vm == evaluate(mu, a) + evaluate(mu, b), "inclusion-exclusion");
                   exact_case(out, evaluate(mu, u) == oracle(u), "atom oracle");
                 }
               }});
  f.push_back({"euler_characteristic", true, 0, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 auto d = std::make_shared<const Subdivision>(face_subdivision(p));
                 GeneratorTable ones;
                 for (int i = 0; i < d->size(); ++i) ones[i] = MeasureValue(1);
                 Measure mu = extend(d, ones);
                 exact_case(out, evaluate(mu, ComplexSet(d, {d->index_of(p)})) == MeasureValue(1), "chi(P) != 1");
                 std::vector<int> proper;
                 for (int i = 0; i < d->size(); ++i)
                   if (d->cell(i).dim() < p.dim()) proper.push_back(i);
                 if (!proper.empty()) {
                   const long sphere = p.dim() % 2 ? 2 : 0;
                   exact_case(out, evaluate(mu, ComplexSet(d, proper)) == MeasureValue(sphere), "chi(boundary)");
                 }
               }});
  f.push_back({"external_angle_sum", false, 1e-12, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 double s = 0;
                 for (int v : p.faces_of_dim(0)) s += external_angle_value(p, v);
                 approx_case(out, std::abs(s - 1), 1e-12 * c.scale, "vertex external angles");
               }});
  f.push_back({"gauss_degree", false, 1e-6, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 double v = integrate(normal_cycle(p), lipschitz_killing_form(n, 0), c.q).real();
                 approx_case(out, std::abs(v - 1), 1e-6 * c.scale, "integral of the Gauss form over N(P)");
               }});
  f.push_back({"intrinsic_volumes", false, 1e-6, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 CycleChain nc = normal_cycle(p);
                 for (int k = 0; k < n; ++k) {
                   double a = integrate(nc, lipschitz_killing_form(n, k), c.q).real();
                   double b = intrinsic_volume(p, k);
                   approx_case(out, std::abs(a - b) / std::max(1.0, std::abs(b)), 1e-6 * c.scale,
                               "V_" + std::to_string(k) + " form vs external angles");
                 }
               }});
  f.push_back({"steiner_monte_carlo", false, 5e-3, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 for (double eps : {0.1, 0.5}) {
                   double exact = steiner_volume(p, eps);
                   auto mc = steiner_monte_carlo(p, eps, c.config.steiner_samples, c.rng());
                   approx_case(out, std::abs(mc.value - exact) / exact, 5e-3 * c.scale + 4 * mc.std_error / exact,
                               "eps = " + fmt(eps));
                 }
               }});
  f.push_back({"stokes_closedness", false, 1e-8, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 CycleChain nc = normal_cycle(p), cc = characteristic_cycle(p);
                 double worst_flip = 0;
                 for (int r = 0; r < c.config.repeats; ++r) {
                   if (n >= 2)
                     approx_case(out, stokes_check(nc, random_form(Ambient::N, n, n - 2, c.rng, Polynomial::constant(2 * n, 1)), c.q),
                                 1e-8 * c.scale, "N(P) exact form");
                   DifferentialForm g = random_form(Ambient::CC, n, n - 1, c.rng, fiber_cutoff(n, 2, 3));
                   g.fiber_radius = Rational(2);
                   approx_case(out, stokes_check(cc, g, c.q), 1e-8 * c.scale, "CC(P) exact form");
                   if (r == 0) {
                     std::vector<int> vertical(n - 1);
                     std::iota(vertical.begin(), vertical.end(), n + 1);
                     g.add((Polynomial::constant(2 * n, 1) + Polynomial::variable(2 * n, 0)) * fiber_cutoff(n, 2, 3), vertical);
                     for (int i = 0; i < static_cast<int>(cc.cells.size()); ++i)
                       if (cc.cells[i].base_dim == 0) worst_flip = std::max(worst_flip, stokes_check(flip_cell(cc, i), g, c.q));
                   }
                 }
                 const bool ok = worst_flip > 1e-3;
                 out.push_back({0.0, ok, ok ? "" : "flipped vertex cell stayed closed (" + fmt(worst_flip) + ")"});
               }});
  f.push_back({"representation_consistency", false, 1e-7, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 for (int k = 0; k <= n; ++k) {
                   Valuation phi = intrinsic_volume_valuation(n, k);
                   phi.cc_form = pair_to_cc(*phi.pair, 1);
                   approx_case(out, representation_gap(phi, p, c.q), 1e-7 * c.scale, "pair vs CC-form, k = " + std::to_string(k));
                 }
               }});
  f.push_back({"valuation_additivity", false, 1e-7, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 if (p.dim() < 1) return;
                 Vec a = zeros(n);
                 int axis = 0;
                 while (p.box_lo()[axis] == p.box_hi()[axis]) ++axis;
                 a[axis] = 1;
                 Rational cut = (p.box_lo()[axis] + p.box_hi()[axis]) / 2;
                 Vec b = a;
                 b[axis] = -1;
                 Polytope left = *intersect(p, std::vector<Halfspace>{{b, -cut}});
                 Polytope right = *intersect(p, std::vector<Halfspace>{{a, cut}});
                 Polytope meet = *intersect(left, right);
                 for (int r = 0; r < c.config.repeats; ++r) {
                   Valuation phi = Valuation::from_cc_form(random_bump_form(n, c.rng));
                   auto lhs = eval(phi, p, c.q) + eval(phi, meet, c.q);
                   auto rhs = eval(phi, left, c.q) + eval(phi, right, c.q);
                   approx_case(out, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)), 1e-7 * c.scale, "cut along an axis");
                 }
               }});
  f.push_back({"mcmullen_polynomiality", false, 1e-7, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 for (int r = 0; r < c.config.repeats; ++r) {
                   Valuation phi = Valuation::from_cc_form(random_level_form(n, 0, c.rng));
                   Vec x = zeros(n);
                   x[0] = Rational(static_cast<long>(c.rng() % 5) - 2, 3);
                   McMullenFit fit, twice;
                   try {
                     fit = mcmullen_decompose(phi, p, x, default_samples(), c.q, 1.0);
                     twice = mcmullen_decompose(phi, affine_image(p, 2, zeros(n)), x, default_samples(), c.q, 1.0);
                   } catch (const NotPolynomial& e) {
                     approx_case(out, e.residual, 0, "fit");
                     continue;
                   }
                   approx_case(out, fit.residual / std::max(fit.scale, 1e-300), 1e-7 * c.scale, "fit residual");
                   double worst = 0;
                   for (int k = 0; k <= n; ++k)
                     worst = std::max(worst, std::abs(twice.coefficients[k] - std::pow(2.0, k) * fit.coefficients[k]) /
                                                 std::max(1.0, std::abs(twice.coefficients[k])));
                   approx_case(out, worst, 1e-6 * c.scale, "homogeneity of components");
                 }
               }});
  f.push_back({"filtration_compatibility", false, 1e-8, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 for (int level = 0; level <= n; ++level) {
                   DifferentialForm w = random_level_form(n, level, c.rng);
                   Vec x = zeros(n);
                   x[n - 1] = Rational(1, 3);
                   FiltrationDegree deg = filtration_degree(Valuation::from_cc_form(w), {{p, x}}, 1e-8 * c.scale, c.q);
                   const bool ok = deg.degree >= level && deg.degree <= n;
                   out.push_back({0.0, ok,
                                  ok ? "" : "level " + std::to_string(level) + " form reported degree " + std::to_string(deg.degree)});
                 }
               }});
  f.push_back({"euler_verdier", false, 1e-8, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 for (int r = 0; r < c.config.repeats; ++r) {
                   DifferentialForm w = random_bump_form(n, c.rng);
                   DifferentialForm twice = euler_verdier(euler_verdier(w));
                   bool same = twice.terms.size() == w.terms.size();
                   for (std::size_t i = 0; same && i < w.terms.size(); ++i)
                     same = twice.terms[i].coef.polynomial() == w.terms[i].coef.polynomial() &&
                            twice.terms[i].wedge == w.terms[i].wedge && twice.terms[i].scale == w.terms[i].scale;
                   out.push_back({0.0, same, same ? "" : "sigma^2 != id"});
                   if (n <= 2) approx_case(out, verdier_identity_check(p, w, c.q).residual, 1e-8 * c.scale, "Verdier identity");
                 }
               }});
  f.push_back({"graded_sign_law", false, 1e-6, [](Context& c, std::vector<Case>& out) {
                 const Polytope& p = c.entry.body;
                 const int n = p.ambient_dim();
                 for (int r = 0; r < c.config.repeats; ++r) {
                   Valuation phi = Valuation::from_cc_form(random_level_form(n, 0, c.rng));
                   Vec x = zeros(n);
                   auto a = mcmullen_decompose(euler_verdier(phi), p, x, default_samples(), c.q, 1.0);
                   auto b = mcmullen_decompose(phi, negate(p), x, default_samples(), c.q, 1.0);
                   double worst = 0;
                   for (int k = 0; k <= n; ++k)
                     worst = std::max(worst, std::abs(a.coefficients[k] - (k % 2 ? -1.0 : 1.0) * b.coefficients[k]) /
                                                 std::max(1.0, a.scale));
                   approx_case(out, worst, 1e-6 * c.scale, "c_k(sigma phi; K) vs (-1)^k c_k(phi; -K)");
                 }
               }});
  return f;
}

}  // namespace

std::vector<std::string> suite_family_names() {
  std::vector<std::string> names;
  for (const auto& f : families()) names.push_back(f.name);
  return names;
}

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report;
  std::vector<Entry> corpus;
  for (const auto& label : config.corpus) {
    try {
      corpus.push_back({label, corpus_entry(label)});
    } catch (const std::exception& e) {
      const std::string what = e.what();
      report.diagnostics.push_back(what.rfind(label, 0) == 0 ? what : label + ": " + what);
    }
  }
  if (corpus.empty()) return report;

  const auto defs = families();
  const int nf = static_cast<int>(defs.size()), np = static_cast<int>(corpus.size());
  std::vector<std::vector<Case>> results(static_cast<std::size_t>(nf * np));
  std::vector<std::string> crashes(results.size());
  std::ofstream log;
  if (!config.log_path.empty()) log.open(config.log_path, std::ios::app);
  std::mutex log_mu;
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int item = next++; item < nf * np; item = next++) {
      const int fi = item / np, pi = item % np;
      std::seed_seq seq{config.seed, static_cast<std::uint64_t>(fi), static_cast<std::uint64_t>(pi)};
      Context ctx{config, corpus[pi], std::mt19937_64(seq), QuadratureRule{config.quad_order, config.tol},
                  config.tol / 1e-8};
      const auto start = std::chrono::steady_clock::now();
      try {
        defs[fi].run(ctx, results[item]);
      } catch (const std::exception& e) {
        crashes[item] = e.what();
      }
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      if (log.is_open()) {
        double worst = 0;
        bool ok = crashes[item].empty();
        for (const auto& c : results[item]) {
          worst = std::max(worst, c.residual);
          ok = ok && c.ok;
        }
        std::lock_guard<std::mutex> lock(log_mu);
        log << Json{{"family", defs[fi].name}, {"polytope", corpus[pi].label}, {"cases", results[item].size()},
                    {"passed", ok}, {"worst_residual", worst}, {"runtime_ms", ms}}
                   .dump()
            << '\n'
            << std::flush;
      }
    }
  };
  int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, nf * np);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (int fi = 0; fi < nf; ++fi) {
    FamilyResult r;
    r.name = defs[fi].name;
    r.exact = defs[fi].exact;
    r.tolerance = tolerance_of(defs[fi], config);
    for (int pi = 0; pi < np; ++pi) {
      const int item = fi * np + pi;
      if (!crashes[item].empty()) {
        ++r.cases;
        ++r.failures;
        r.messages.push_back(corpus[pi].label + ": error: " + crashes[item]);
      }
      for (const auto& c : results[item]) {
        ++r.cases;
        r.residual = std::max(r.residual, c.residual);
        if (!c.ok) {
          ++r.failures;
          if (r.messages.size() < 8) r.messages.push_back(corpus[pi].label + ": " + c.message);
        }
      }
    }
    r.passed = r.failures == 0;
    report.families.push_back(std::move(r));
  }
  return report;
}

}  // namespace polyval
