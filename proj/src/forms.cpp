#include "polyval/forms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace polyval {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Polynomial p(nvars);
  Exponent e(nvars, 0);
  e[i] = 1;
  p.add_term(e, 1);
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("polynomial: exponent length mismatch");
  if (c == 0) return;
  compiled_.reset();
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int Polynomial::degree() const { return partial_degree(0, nvars_); }

int Polynomial::partial_degree(int lo, int hi) const {
  int best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, std::accumulate(e.begin() + lo, e.begin() + hi, 0));
  return best;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = nvars_ >= o.nvars_ ? *this : o;
  const Polynomial& other = nvars_ >= o.nvars_ ? o : *this;
  if (other.nvars_ != r.nvars_ && !other.is_zero()) throw std::invalid_argument("polynomial: variable count mismatch");
  for (const auto& [e, c] : other.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial(std::max(nvars_, o.nvars_));
  if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial: variable count mismatch");
  Polynomial r(nvars_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      Exponent e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = a[i] + b[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(nvars_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial r = constant(nvars_, 1);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    --f[i];
    r.add_term(f, c * e[i]);
  }
  return r;
}

Polynomial Polynomial::reflect(int lo, int hi) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    int deg = std::accumulate(e.begin() + lo, e.begin() + hi, 0);
    r.add_term(e, deg % 2 ? -c : c);
  }
  return r;
}

Polynomial Polynomial::extend(int nvars) const {
  if (nvars < nvars_) throw std::invalid_argument("polynomial: cannot drop variables");
  Polynomial r(nvars);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f.resize(nvars, 0);
    r.add_term(f, c);
  }
  return r;
}

const Polynomial::Compiled& Polynomial::compiled() const {
  auto c = std::atomic_load(&compiled_);
  if (c) return *c;
  auto fresh = std::make_shared<Compiled>();
  fresh->max_exp.assign(nvars_, 0);
  for (const auto& [e, v] : terms_) {
    fresh->coef.push_back(to_double(v));
    for (int i = 0; i < nvars_; ++i) {
      fresh->exps.push_back(e[i]);
      fresh->max_exp[i] = std::max(fresh->max_exp[i], e[i]);
    }
  }
  fresh->offset.assign(nvars_ + 1, 0);
  for (int i = 0; i < nvars_; ++i) fresh->offset[i + 1] = fresh->offset[i] + fresh->max_exp[i] + 1;
  std::shared_ptr<const Compiled> done = fresh;
  std::atomic_store(&compiled_, done);
  return *done;
}

double Polynomial::eval(const std::vector<double>& y) const {
  if (terms_.empty()) return 0;
  const Compiled& c = compiled();
  thread_local std::vector<double> powers;
  const std::vector<int>& offset = c.offset;
  powers.resize(offset[nvars_]);
  for (int i = 0; i < nvars_; ++i) {
    double p = 1;
    for (int k = 0; k <= c.max_exp[i]; ++k) {
      powers[offset[i] + k] = p;
      p *= y[i];
    }
  }
  double s = 0;
  const int* e = c.exps.data();
  for (double coef : c.coef) {
    double m = coef;
    for (int i = 0; i < nvars_; ++i, ++e)
      if (*e) m *= powers[offset[i] + *e];
    s += m;
  }
  return s;
}

std::complex<double> Coefficient::operator()(const std::vector<double>& y) const {
  if (is_polynomial()) return polynomial().eval(y);
  return std::get<Callback>(v_)(y);
}

int sort_wedge(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
      if (idx[j] == idx[j + 1]) return 0;
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
    }
  for (std::size_t j = 0; j + 1 < idx.size(); ++j)
    if (idx[j] == idx[j + 1]) return 0;
  return sign;
}

int DifferentialForm::horizontal_degree(const FormTerm& t) const {
  return static_cast<int>(std::count_if(t.wedge.begin(), t.wedge.end(), [&](int i) { return i < n; }));
}

bool DifferentialForm::is_polynomial() const {
  return std::all_of(terms.begin(), terms.end(), [](const FormTerm& t) { return t.coef.is_polynomial(); });
}

void DifferentialForm::add(Coefficient c, std::vector<int> idx, std::complex<double> scale) {
  if (static_cast<int>(idx.size()) != degree) throw std::invalid_argument("form: term degree mismatch");
  for (int i : idx)
    if (i < 0 || i >= 2 * n) throw std::invalid_argument("form: differential index out of range");
  int s = sort_wedge(idx);
  if (s == 0 || c.is_zero()) return;
  if (c.is_polynomial()) {
    Polynomial p = s < 0 ? c.polynomial() * Rational(-1) : c.polynomial();
    for (auto& t : terms)
      if (t.coef.is_polynomial() && t.wedge == idx && t.scale == scale) {
        t.coef = t.coef.polynomial() + p;
        return;
      }
    terms.push_back({std::move(p), std::move(idx), scale});
    return;
  }
  terms.push_back({std::move(c), std::move(idx), s < 0 ? -scale : scale});
}

namespace {

DifferentialForm like(const DifferentialForm& w, int degree) {
  DifferentialForm r;
  r.ambient = w.ambient;
  r.n = w.n;
  r.degree = degree;
  r.support_box = w.support_box;
  r.fiber_radius = w.fiber_radius;
  return r;
}

}  // namespace

DifferentialForm exterior_derivative(const DifferentialForm& w) {
  DifferentialForm r = like(w, w.degree + 1);
  for (const auto& t : w.terms) {
    if (!t.coef.is_polynomial()) throw std::invalid_argument("exterior derivative: callback coefficient");
    for (int j = 0; j < 2 * w.n; ++j) {
      Polynomial dj = t.coef.polynomial().derivative(j);
      if (dj.is_zero()) continue;
      std::vector<int> idx{j};
      idx.insert(idx.end(), t.wedge.begin(), t.wedge.end());
      r.add(std::move(dj), std::move(idx), t.scale);
    }
  }
  return r;
}

DifferentialForm euler_verdier(const DifferentialForm& w) {
  if (w.ambient != Ambient::CC) throw std::invalid_argument("euler_verdier: CC-space form required");
  const int n = w.n;
  DifferentialForm r = like(w, w.degree);
  for (const auto& t : w.terms) {
    int vertical = static_cast<int>(t.wedge.size()) - w.horizontal_degree(t);
    bool odd = (n + vertical) % 2;
    if (t.coef.is_polynomial()) {
      Polynomial p = t.coef.polynomial().reflect(n, 2 * n);
      r.terms.push_back({odd ? p * Rational(-1) : p, t.wedge, t.scale});
    } else {
      Coefficient c = t.coef;
      Callback f = [c, n](const std::vector<double>& y) {
        std::vector<double> z = y;
        for (int i = n; i < 2 * n; ++i) z[i] = -z[i];
        return c(z);
      };
      r.terms.push_back({std::move(f), t.wedge, odd ? -t.scale : t.scale});
    }
  }
  return r;
}

std::optional<int> form_filtration_level(const DifferentialForm& w) {
  if (!w.is_polynomial()) return std::nullopt;
  int level = w.n + 1;
  for (const auto& t : w.terms)
    if (!t.coef.is_zero() && t.scale != 0.0) level = std::min(level, w.horizontal_degree(t));
  return level;
}

DifferentialForm scaled(const DifferentialForm& w, std::complex<double> c) {
  DifferentialForm r = w;
  for (auto& t : r.terms) t.scale *= c;
  return r;
}

DifferentialForm sum(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.ambient != b.ambient || a.n != b.n || a.degree != b.degree)
    throw std::invalid_argument("form sum: incompatible forms");
  DifferentialForm r = a;
  if (!r.support_box) r.support_box = b.support_box;
  if (!r.fiber_radius || (b.fiber_radius && *b.fiber_radius > *r.fiber_radius)) r.fiber_radius = b.fiber_radius;
  for (const auto& t : b.terms) r.terms.push_back(t);
  return r;
}

Polynomial fiber_cutoff(int n, const Rational& radius, int k) {
  Polynomial q = Polynomial::constant(2 * n, 1);
  for (int i = 0; i < n; ++i) {
    Polynomial xi = Polynomial::variable(2 * n, n + i);
    q = q - xi * xi * (Rational(1) / (radius * radius));
  }
  return q.pow(k);
}

DifferentialForm lipschitz_killing_form(int n, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("lipschitz_killing_form: k out of range");
  DifferentialForm w;
  w.ambient = Ambient::N;
  w.n = n;
  w.degree = n - 1;
  const int m = n - k - 1;
  double sphere = 2 * std::pow(std::numbers::pi, (m + 1) / 2.0) / std::tgamma((m + 1) / 2.0);
  double factorials = std::tgamma(k + 1.0) * std::tgamma(m + 1.0);
  const std::complex<double> c = 1.0 / (factorials * sphere);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> p = perm;
    int sgn = sort_wedge(p);
    std::vector<int> idx;
    for (int i = 1; i <= k; ++i) idx.push_back(perm[i]);
    for (int i = k + 1; i < n; ++i) idx.push_back(n + perm[i]);
    w.add(Polynomial::variable(2 * n, n + perm[0]) * Rational(sgn), idx, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return w;
}

}  // namespace polyval
