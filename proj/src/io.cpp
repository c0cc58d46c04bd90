#include "polyval/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace polyval {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw FormatError("rational must be a string \"p/q\" or an integer");
}

std::string vertical_name(Ambient a) { return a == Ambient::CC ? "xi" : "u"; }

// Variable index for "x3", "xi2", "u1".
int variable_index(const std::string& name, Ambient a, int n) {
  const std::string v = vertical_name(a);
  int base = 0;
  std::string digits;
  if (name.rfind(v, 0) == 0 && name.size() > v.size() && std::isdigit(static_cast<unsigned char>(name[v.size()]))) {
    base = n;
    digits = name.substr(v.size());
  } else if (name.size() > 1 && name[0] == 'x') {
    digits = name.substr(1);
  } else {
    throw FormatError("unknown variable \"" + name + "\"");
  }
  int i = 0;
  try {
    std::size_t used = 0;
    i = std::stoi(digits, &used);
    if (used != digits.size()) throw FormatError("bad variable \"" + name + "\"");
  } catch (const std::logic_error&) {
    throw FormatError("bad variable \"" + name + "\"");
  }
  if (i < 1 || i > n) throw FormatError("variable \"" + name + "\" out of range");
  return base + i - 1;
}

std::string variable_name(int idx, Ambient a, int n) {
  return idx < n ? "x" + std::to_string(idx + 1) : vertical_name(a) + std::to_string(idx - n + 1);
}

std::string double_text(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

Json to_json(const Vec& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(format_rational(x));
  return j;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("point must be an array");
  Vec v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

Json to_json(const Polytope& p) {
  Json j;
  j["dim"] = p.ambient_dim();
  j["vertices"] = Json::array();
  for (const auto& v : p.vertices()) j["vertices"].push_back(to_json(v));
  return j;
}

Polytope polytope_from_json(const Json& j) {
  const int n = field(j, "dim").get<int>();
  std::vector<Vec> pts;
  for (const auto& v : field(j, "vertices")) {
    pts.push_back(vec_from_json(v));
    if (static_cast<int>(pts.back().size()) != n) throw FormatError("vertex dimension differs from \"dim\"");
  }
  if (pts.empty()) throw FormatError("polytope without vertices");
  return Polytope::hull(pts);
}

Json describe(const Polytope& p) {
  Json j = to_json(p);
  j["affine_dim"] = p.dim();
  j["facets"] = Json::array();
  for (const auto& h : p.halfspaces()) j["facets"].push_back({{"normal", to_json(h.normal)}, {"offset", format_rational(h.offset)}});
  j["equations"] = Json::array();
  for (const auto& e : p.equations()) j["equations"].push_back({{"normal", to_json(e.normal)}, {"offset", format_rational(e.offset)}});
  Json f = Json::array();
  for (int k = 0; k <= p.dim(); ++k) f.push_back(p.faces_of_dim(k).size());
  j["f_vector"] = f;
  j["faces"] = Json::array();
  for (const auto& face : p.faces()) j["faces"].push_back({{"dim", face.dim}, {"vertices", face.vertices}});
  return j;
}

Json to_json(const Subdivision& d) {
  Json j;
  j["target"] = Json::array();
  for (const auto& t : d.target()) j["target"].push_back(to_json(t));
  j["cells"] = Json::array();
  for (const auto& c : d.cells()) j["cells"].push_back(to_json(c));
  return j;
}

Subdivision subdivision_from_json(const Json& j) {
  std::vector<Polytope> target, cells;
  const Json& t = field(j, "target");
  if (t.is_array()) {
    for (const auto& p : t) target.push_back(polytope_from_json(p));
  } else {
    target.push_back(polytope_from_json(t));
  }
  for (const auto& c : field(j, "cells")) cells.push_back(polytope_from_json(c));
  return Subdivision(std::move(target), std::move(cells));
}

Json value_json(std::complex<double> z) { return Json::array({double_text(z.real()), double_text(z.imag())}); }

Json value_json(const MeasureValue& v) {
  if (!v.exact()) return value_json(v.value());
  return Json::array({format_rational(v.exact_value().re), format_rational(v.exact_value().im)});
}

Json to_json(const GeneratorTable& m) {
  Json values = Json::object();
  for (const auto& [cell, v] : m) values[std::to_string(cell)] = value_json(v);
  return Json{{"values", values}};
}

GeneratorTable generators_from_json(const Json& j) {
  GeneratorTable m;
  for (const auto& [key, v] : field(j, "values").items()) {
    int cell = 0;
    try {
      cell = std::stoi(key);
    } catch (const std::logic_error&) {
      throw FormatError("generator key \"" + key + "\" is not a cell index");
    }
    auto part = [](const Json& x) -> std::string {
      if (x.is_string()) return x.get<std::string>();
      if (x.is_number()) return x.dump();
      throw FormatError("generator value entries must be strings or numbers");
    };
    Json arr = v.is_array() ? v : Json::array({v, "0"});
    if (arr.size() != 2) throw FormatError("generator value must be [re, im]");
    std::string re = part(arr[0]), im = part(arr[1]);
    auto inexact = [](const std::string& s) { return s.find_first_of(".eE") != std::string::npos; };
    if (inexact(re) || inexact(im)) {
      m[cell] = MeasureValue::approx(std::stod(re), std::stod(im));
    } else {
      m[cell] = MeasureValue(parse_rational(re), parse_rational(im));
    }
  }
  return m;
}

Json to_json(const Polynomial& p, Ambient a, int n) {
  Json j = Json::object();
  for (const auto& [e, c] : p.terms()) {
    std::string mono;
    for (int i = 0; i < static_cast<int>(e.size()); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += variable_name(i, a, n);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    j[mono.empty() ? "1" : mono] = format_rational(c);
  }
  return j;
}

Polynomial polynomial_from_json(const Json& j, Ambient a, int n) {
  if (!j.is_object()) throw FormatError("polynomial must be an object of monomial: coefficient");
  Polynomial p(2 * n);
  for (const auto& [mono, c] : j.items()) {
    Polynomial::Exponent e(2 * n, 0);
    if (mono != "1") {
      std::stringstream s(mono);
      std::string factor;
      while (std::getline(s, factor, '*')) {
        auto caret = factor.find('^');
        int power = 1;
        if (caret != std::string::npos) {
          try {
            power = std::stoi(factor.substr(caret + 1));
          } catch (const std::logic_error&) {
            throw FormatError("bad exponent in \"" + mono + "\"");
          }
          if (power < 0) throw FormatError("negative exponent in \"" + mono + "\"");
        }
        e[variable_index(factor.substr(0, caret), a, n)] += power;
      }
    }
    p.add_term(e, rational_from_json(c));
  }
  return p;
}

Json to_json(const DifferentialForm& w) {
  Json j;
  j["ambient"] = w.ambient == Ambient::CC ? "CC" : "N";
  j["n"] = w.n;
  j["degree"] = w.degree;
  j["terms"] = Json::array();
  for (const auto& t : w.terms) {
    if (!t.coef.is_polynomial()) throw FormatError("callback coefficients cannot be serialized");
    Json wedge = Json::array();
    for (int i : t.wedge) wedge.push_back("d" + variable_name(i, w.ambient, w.n));
    Json term{{"coef", {{"poly", to_json(t.coef.polynomial(), w.ambient, w.n)}}}, {"wedge", wedge}};
    if (t.scale != 1.0) term["scale"] = Json::array({t.scale.real(), t.scale.imag()});
    j["terms"].push_back(term);
  }
  if (w.support_box) {
    Json box = Json::array();
    for (std::size_t i = 0; i < w.support_box->first.size(); ++i)
      box.push_back({format_rational(w.support_box->first[i]), format_rational(w.support_box->second[i])});
    j["support_box"] = box;
  }
  if (w.fiber_radius) j["fiber_radius"] = format_rational(*w.fiber_radius);
  return j;
}

DifferentialForm form_from_json(const Json& j) {
  DifferentialForm w;
  const std::string amb = field(j, "ambient").get<std::string>();
  if (amb == "CC") {
    w.ambient = Ambient::CC;
  } else if (amb == "N") {
    w.ambient = Ambient::N;
  } else {
    throw FormatError("ambient must be \"CC\" or \"N\"");
  }
  w.n = field(j, "n").get<int>();
  if (w.n < 1) throw FormatError("n must be positive");
  const Json& terms = field(j, "terms");
  if (j.contains("degree")) {
    w.degree = j["degree"].get<int>();
  } else if (!terms.empty()) {
    w.degree = static_cast<int>(field(terms[0], "wedge").size());
  } else {
    w.degree = w.ambient == Ambient::CC ? w.n : w.n - 1;
  }
  for (const auto& t : terms) {
    Polynomial p = polynomial_from_json(field(field(t, "coef"), "poly"), w.ambient, w.n);
    std::vector<int> idx;
    for (const auto& name : field(t, "wedge")) {
      std::string s = name.get<std::string>();
      if (s.size() < 2 || s[0] != 'd') throw FormatError("bad differential \"" + s + "\"");
      idx.push_back(variable_index(s.substr(1), w.ambient, w.n));
    }
    std::complex<double> scale = 1.0;
    if (t.contains("scale")) scale = {t["scale"].at(0).get<double>(), t["scale"].at(1).get<double>()};
    try {
      w.add(std::move(p), std::move(idx), scale);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  if (j.contains("support_box")) {
    Vec lo, hi;
    for (const auto& r : j["support_box"]) {
      lo.push_back(rational_from_json(r.at(0)));
      hi.push_back(rational_from_json(r.at(1)));
    }
    if (static_cast<int>(lo.size()) != w.n) throw FormatError("support_box must have n intervals");
    w.support_box = std::make_pair(lo, hi);
  }
  if (j.contains("fiber_radius")) w.fiber_radius = rational_from_json(j["fiber_radius"]);
  return w;
}

Valuation valuation_from_json(const Json& j) {
  if (j.contains("intrinsic")) return intrinsic_volume_valuation(field(j, "n").get<int>(), j["intrinsic"].get<int>());
  if (j.contains("density")) {
    DifferentialForm eta = form_from_json(field(j, "eta"));
    if (eta.ambient != Ambient::N || eta.degree != eta.n - 1) throw FormatError("eta must be an N-space (n-1)-form");
    Polynomial nu = polynomial_from_json(field(j["density"], "poly"), Ambient::CC, eta.n);
    Polynomial base(eta.n);
    for (const auto& [e, c] : nu.terms()) {
      for (int i = eta.n; i < 2 * eta.n; ++i)
        if (e[i]) throw FormatError("density may depend on x only");
      base.add_term(Polynomial::Exponent(e.begin(), e.begin() + eta.n), c);
    }
    return Valuation::from_pair(Density{base}, eta);
  }
  DifferentialForm w = form_from_json(j);
  if (w.ambient != Ambient::CC || w.degree != w.n) throw FormatError("valuation form must be a CC-space n-form");
  return Valuation::from_cc_form(w);
}

Json to_json(const CycleChain& c) {
  Json j;
  j["ambient"] = c.ambient == Ambient::CC ? "CC" : "N";
  j["dim"] = c.dim();
  j["polytope"] = to_json(c.polytope);
  j["cells"] = Json::array();
  for (const auto& cell : c.cells) {
    Json rays = Json::array(), lines = Json::array();
    for (const auto& r : cell.normal_cone.rays) rays.push_back(to_json(r));
    for (const auto& l : cell.normal_cone.lines) lines.push_back(to_json(l));
    j["cells"].push_back({{"face", c.polytope.face(cell.face).vertices},
                          {"base_dim", cell.base_dim},
                          {"cone_dim", cell.cone_dim},
                          {"cone_rays", rays},
                          {"cone_lines", lines},
                          {"sign", cell.orientation_sign},
                          {"frame_sign", cell.frame_sign}});
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot write");
  out << text;
}

}  // namespace polyval
