#include "polyval/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace polyval;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int quad_order = 16;
  std::string out;
};

Globals g;

void emit(const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
}

void emit(const Json& j) { emit(j.dump(2) + "\n"); }

QuadratureRule rule() { return {g.quad_order, g.tol}; }

Polytope read_polytope(const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_array()) {
    std::vector<Vec> pts;
    for (const auto& p : j) pts.push_back(vec_from_json(p));
    if (pts.empty()) throw FormatError(path + ": no points");
    return Polytope::hull(pts);
  }
  if (j.contains("points")) {
    std::vector<Vec> pts;
    for (const auto& p : j["points"]) pts.push_back(vec_from_json(p));
    if (pts.empty()) throw FormatError(path + ": no points");
    return Polytope::hull(pts);
  }
  return polytope_from_json(j);
}

SubdivisionPtr read_subdivision(const std::string& path) {
  return std::make_shared<const Subdivision>(subdivision_from_json(read_json_file(path)));
}

std::vector<int> cell_list(const std::vector<int>& cells, const Subdivision& d) {
  for (int c : cells)
    if (c < 0 || c >= d.size()) throw FormatError("cell index " + std::to_string(c) + " out of range");
  return cells;
}

Vec parse_point(const std::string& text, int n) {
  Vec x;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) x.push_back(parse_rational(item));
  if (x.empty()) x = zeros(n);
  if (static_cast<int>(x.size()) != n) throw FormatError("point has the wrong dimension");
  return x;
}

PolytopeEvaluator evaluator_from(const Json& desc) {
  if (desc.is_string() && desc == "euler") return [](const Polytope&) { return MeasureValue(1); };
  if (desc.is_string() && desc == "volume")
    return [](const Polytope& p) { return MeasureValue::approx(p.dim() == p.ambient_dim() ? p.volume() : 0.0); };
  Valuation phi = valuation_from_json(desc);
  return [phi](const Polytope& p) { return MeasureValue(eval(phi, p, rule())); };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact polytope geometry, constructible measures and curvature-form valuations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", g.tol, "Tolerance for quadrature-based checks")->capture_default_str();
  app.add_option("--quad-order", g.quad_order, "Gauss-Legendre points per direction")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default: stdout)");

  int status = 0;

  // hull
  auto* hull = app.add_subcommand("hull", "Convex hull and face lattice of a point set or polytope file");
  std::string hull_in;
  hull->add_option("input", hull_in, "JSON array of points or polytope JSON")->required();
  hull->callback([&] { emit(describe(read_polytope(hull_in))); });

  // subdiv
  auto* subdiv = app.add_subcommand("subdiv", "Subdivisions");
  subdiv->require_subcommand(1);
  std::string sd_a, sd_b;
  std::vector<int> sd_cells;
  auto* verify = subdiv->add_subcommand("verify", "Check the subdivision conditions");
  verify->add_option("file", sd_a)->required();
  verify->callback([&] {
    auto rep = verify_subdivision(*read_subdivision(sd_a), g.seed);
    Json j{{"ok", rep.ok}, {"violations", Json::array()}};
    for (const auto& v : rep.violations) {
      Json e{{"condition", v.condition}, {"message", v.message}, {"cells", v.cells}};
      if (v.witness) e["witness"] = to_json(*v.witness);
      j["violations"].push_back(e);
    }
    emit(j);
    if (!rep.ok) status = 1;
  });
  auto* inter = subdiv->add_subcommand("intersect", "Common refinement of two transversal subdivisions");
  inter->add_option("a", sd_a)->required();
  inter->add_option("b", sd_b)->required();
  inter->callback([&] {
    auto a = read_subdivision(sd_a), b = read_subdivision(sd_b);
    try {
      emit(to_json(intersect_subdivisions(*a, *b)));
    } catch (const NonTransversal& e) {
      emit(Json{{"error", "non-transversal"}, {"message", e.what()}, {"cells", {e.cell_a, e.cell_b}}, {"witness", to_json(e.witness)}});
      status = 1;
    }
  });
  auto* tri = subdiv->add_subcommand("triangulate", "Cone triangulation refining every cell");
  tri->add_option("file", sd_a)->required();
  tri->callback([&] { emit(to_json(cone_triangulate(*read_subdivision(sd_a)))); });
  auto* reduce = subdiv->add_subcommand("reduce", "Reduced decomposition of a union of cells");
  reduce->add_option("file", sd_a)->required();
  reduce->add_option("--cells", sd_cells, "Cell indices")->required()->delimiter(',');
  reduce->callback([&] {
    auto d = read_subdivision(sd_a);
    emit(Json{{"reduced", reduced_decomposition(ComplexSet(d, cell_list(sd_cells, *d)))}});
  });

  // measure
  auto* measure = app.add_subcommand("measure", "Constructible measures on subdivisions");
  measure->require_subcommand(1);
  std::string ms_sub, ms_gen, ms_cover;
  std::vector<int> ms_cells;
  bool check_assumptions = true;
  auto* mext = measure->add_subcommand("extend", "Extend generators and report atom weights");
  mext->add_option("subdivision", ms_sub)->required();
  mext->add_option("generators", ms_gen)->required();
  mext->add_flag("--check-assumptions,!--no-check-assumptions", check_assumptions, "Certify the subdivision assumptions");
  mext->callback([&] {
    auto d = read_subdivision(ms_sub);
    Measure mu = extend(d, generators_from_json(read_json_file(ms_gen)), check_assumptions);
    Json w = Json::object();
    auto weights = atom_weights(mu);
    for (int i = 0; i < d->size(); ++i) w[std::to_string(i)] = value_json(weights[i]);
    emit(Json{{"exact", mu.exact()}, {"atom_weights", w}});
  });
  auto* meval = measure->add_subcommand("eval", "Value on a union of cells");
  meval->add_option("subdivision", ms_sub)->required();
  meval->add_option("generators", ms_gen)->required();
  meval->add_option("--cells", ms_cells, "Cell indices")->required()->delimiter(',');
  meval->add_flag("--check-assumptions,!--no-check-assumptions", check_assumptions, "Certify the subdivision assumptions");
  meval->callback([&] {
    auto d = read_subdivision(ms_sub);
    Measure mu = extend(d, generators_from_json(read_json_file(ms_gen)), check_assumptions);
    emit(Json{{"value", value_json(evaluate(mu, ComplexSet(d, cell_list(ms_cells, *d))))}});
  });
  auto* mglue = measure->add_subcommand("glue", "Glue local valuations over a box cover");
  mglue->add_option("cover", ms_cover, "{\"boxes\": [{\"lo\", \"hi\", \"valuation\"}]}")->required();
  mglue->add_option("subdivision", ms_sub)->required();
  mglue->add_option("--cells", ms_cells, "Cell indices (default: all)")->delimiter(',');
  mglue->add_flag("--check-assumptions,!--no-check-assumptions", check_assumptions, "Check overlap compatibility");
  mglue->callback([&] {
    auto d = read_subdivision(ms_sub);
    Json cj = read_json_file(ms_cover);
    LocalValuationCover cover;
    for (const auto& b : cj.at("boxes")) {
      cover.boxes.push_back({vec_from_json(b.at("lo")), vec_from_json(b.at("hi"))});
      cover.evaluators.push_back(evaluator_from(b.at("valuation")));
    }
    std::vector<int> cells = ms_cells;
    if (cells.empty())
      for (int i = 0; i < d->size(); ++i) cells.push_back(i);
    GlueOptions opt;
    opt.perturb.seed = g.seed;
    opt.tolerance = g.tol;
    opt.check = check_assumptions;
    try {
      emit(Json{{"value", value_json(glue(cover, ComplexSet(d, cell_list(cells, *d)), opt))}});
    } catch (const OverlapIncompatible& e) {
      emit(Json{{"error", "overlap-incompatible"}, {"message", e.what()}, {"cell", to_json(e.cell)},
                {"values", {value_json(e.first), value_json(e.second)}}});
      status = 1;
    } catch (const CoverError& e) {
      emit(Json{{"error", "cover"}, {"message", e.what()}, {"witness", to_json(e.witness)}});
      status = 1;
    }
  });

  // cycle
  auto* cycle = app.add_subcommand("cycle", "Characteristic and normal cycles");
  cycle->require_subcommand(1);
  std::string cy_poly, cy_form;
  auto* ccmd = cycle->add_subcommand("cc", "Dump the characteristic cycle");
  ccmd->add_option("polytope", cy_poly)->required();
  ccmd->callback([&] { emit(to_json(characteristic_cycle(read_polytope(cy_poly)))); });
  auto* ncmd = cycle->add_subcommand("nc", "Dump the normal cycle");
  ncmd->add_option("polytope", cy_poly)->required();
  ncmd->callback([&] { emit(to_json(normal_cycle(read_polytope(cy_poly)))); });
  auto* stokes = cycle->add_subcommand("stokes", "Integral of d(form) over the cycle matching the form's ambient");
  stokes->add_option("polytope", cy_poly)->required();
  stokes->add_option("--form", cy_form)->required();
  stokes->callback([&] {
    Polytope p = read_polytope(cy_poly);
    DifferentialForm beta = form_from_json(read_json_file(cy_form));
    CycleChain c = beta.ambient == Ambient::CC ? characteristic_cycle(p) : normal_cycle(p);
    double r = stokes_check(c, beta, rule());
    emit(Json{{"residual", r}, {"tolerance", g.tol}, {"passed", r <= g.tol}});
    if (r > g.tol) status = 1;
  });

  // val
  auto* val = app.add_subcommand("val", "Valuations from forms");
  val->require_subcommand(1);
  std::string v_poly, v_file, v_x, v_csv, v_plus, v_minus;
  std::vector<std::string> v_polys;
  double eps = 0.1;
  long samples = 1000000;
  auto* veval = val->add_subcommand("eval", "Evaluate a valuation on a polytope");
  veval->add_option("polytope", v_poly)->required();
  veval->add_option("--valuation", v_file, "CC-form, pair or {\"intrinsic\": k, \"n\": n}")->required();
  veval->callback([&] {
    emit(Json{{"value", value_json(eval(valuation_from_json(read_json_file(v_file)), read_polytope(v_poly), rule()))}});
  });
  auto* vdec = val->add_subcommand("decompose", "Fit t -> phi(tK + x) by a polynomial of degree <= n");
  vdec->add_option("polytope", v_poly)->required();
  vdec->add_option("--valuation", v_file)->required();
  vdec->add_option("--x", v_x, "Base point, comma-separated rationals");
  vdec->add_option("--csv", v_csv, "Write the (t, phi(tK + x)) samples");
  vdec->callback([&] {
    Valuation phi = valuation_from_json(read_json_file(v_file));
    Polytope k = read_polytope(v_poly);
    Vec x = parse_point(v_x, k.ambient_dim());
    Json j;
    try {
      McMullenFit fit = mcmullen_decompose(phi, k, x, default_samples(), rule());
      j["coefficients"] = Json::array();
      for (const auto& c : fit.coefficients) j["coefficients"].push_back(value_json(c));
      j["residual"] = fit.residual;
      j["scale"] = fit.scale;
    } catch (const NotPolynomial& e) {
      j["error"] = "not-polynomial";
      j["residual"] = e.residual;
      status = 1;
    }
    if (!v_csv.empty()) {
      std::ostringstream s;
      s.precision(17);
      s << "t,re,im\n";
      for (const auto& t : default_samples()) {
        auto v = eval(phi, affine_image(k, t, x), rule());
        s << to_double(t) << ',' << v.real() << ',' << v.imag() << '\n';
      }
      write_text(v_csv, s.str());
    }
    emit(j);
  });
  auto* vfil = val->add_subcommand("filtration", "Filtration degree over probe bodies");
  vfil->add_option("polytopes", v_polys)->required();
  vfil->add_option("--valuation", v_file)->required();
  vfil->add_option("--x", v_x, "Base point for every probe");
  vfil->callback([&] {
    Valuation phi = valuation_from_json(read_json_file(v_file));
    std::vector<Probe> probes;
    for (const auto& f : v_polys) {
      Polytope k = read_polytope(f);
      probes.push_back({k, parse_point(v_x, k.ambient_dim())});
    }
    FiltrationDegree d = filtration_degree(phi, probes, g.tol, rule());
    Json j{{"degree", d.degree}, {"zero", d.zero}, {"probes", probes.size()}};
    if (phi.cc_form) {
      auto level = form_filtration_level(*phi.cc_form);
      j["form_level"] = level ? Json(*level) : Json("unknown");
    }
    emit(j);
  });
  auto* vver = val->add_subcommand("verdier-check", "Euler-Verdier identity on CC(P)");
  vver->add_option("polytope", v_poly)->required();
  vver->add_option("--form", v_file)->required();
  vver->callback([&] {
    auto r = verdier_identity_check(read_polytope(v_poly), form_from_json(read_json_file(v_file)), rule());
    emit(Json{{"lhs", value_json(r.lhs)}, {"rhs", value_json(r.rhs)}, {"residual", r.residual}, {"passed", r.residual <= g.tol}});
    if (r.residual > g.tol) status = 1;
  });
  auto* vsplit = val->add_subcommand("split", "Eigen-decomposition under the Euler-Verdier involution");
  vsplit->add_option("--valuation", v_file)->required();
  vsplit->add_option("--plus", v_plus, "Output file for the +1 part")->required();
  vsplit->add_option("--minus", v_minus, "Output file for the -1 part")->required();
  vsplit->callback([&] {
    auto [plus, minus] = eigen_split(valuation_from_json(read_json_file(v_file)));
    write_text(v_plus, to_json(*plus.cc_form).dump(2) + "\n");
    write_text(v_minus, to_json(*minus.cc_form).dump(2) + "\n");
    emit(Json{{"plus", v_plus}, {"minus", v_minus}});
  });
  auto* vst = val->add_subcommand("steiner", "Steiner polynomial against a Monte Carlo neighborhood volume");
  vst->add_option("polytope", v_poly)->required();
  vst->add_option("--eps", eps)->capture_default_str();
  vst->add_option("--samples", samples)->capture_default_str();
  vst->callback([&] {
    Polytope p = read_polytope(v_poly);
    Json iv = Json::array();
    for (int k = 0; k <= p.ambient_dim(); ++k) iv.push_back(intrinsic_volume(p, k));
    double exact = steiner_volume(p, eps);
    auto mc = steiner_monte_carlo(p, eps, samples, g.seed);
    emit(Json{{"intrinsic_volumes", iv}, {"closed_form", exact}, {"monte_carlo", mc.value}, {"std_error", mc.std_error},
              {"relative_difference", std::abs(mc.value - exact) / exact}});
  });

  // suite
  auto* suite = app.add_subcommand("suite", "Run the property suite");
  std::string config_file, log_file;
  suite->add_option("--config", config_file, "Suite configuration JSON");
  suite->add_option("--log", log_file, "JSON-lines progress log");
  suite->callback([&] {
    SuiteConfig c = config_file.empty() ? SuiteConfig::defaults() : SuiteConfig::from_json(read_json_file(config_file));
    if (app.get_option("--seed")->count()) c.seed = g.seed;
    if (app.get_option("--tol")->count()) c.tol = g.tol;
    if (app.get_option("--quad-order")->count()) c.quad_order = g.quad_order;
    if (!log_file.empty()) c.log_path = log_file;
    SuiteReport r = run_suite(c);
    emit(r.to_json());
    if (!r.passed()) status = r.diagnostics.empty() ? 1 : 2;
  });

  // converge
  auto* conv = app.add_subcommand("converge", "Intrinsic volumes of polytope approximants of the disk or ball");
  std::string body = "disk";
  std::vector<int> ms{8, 16, 32, 64};
  int k = 1;
  conv->add_option("--body", body)->check(CLI::IsMember({"disk", "ball"}))->capture_default_str();
  conv->add_option("--m", ms, "Increasing approximation parameters")->delimiter(',');
  conv->add_option("--k", k)->capture_default_str();
  conv->callback([&] {
    auto rows = convergence_experiment(body, ms, k);
    emit(convergence_csv(rows));
    std::cerr << "empirical order " << empirical_order(rows) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
