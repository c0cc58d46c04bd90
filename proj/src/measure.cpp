#include "polyval/measure.hpp"

#include <algorithm>
#include <random>

namespace polyval {

std::complex<double> MeasureValue::value() const {
  if (exact()) {
    const auto& e = exact_value();
    return {to_double(e.re), to_double(e.im)};
  }
  return std::get<std::complex<double>>(v_);
}

MeasureValue MeasureValue::operator+(const MeasureValue& o) const {
  if (exact() && o.exact()) return MeasureValue(exact_value().re + o.exact_value().re, exact_value().im + o.exact_value().im);
  return MeasureValue(value() + o.value());
}

MeasureValue MeasureValue::operator-(const MeasureValue& o) const {
  if (exact() && o.exact()) return MeasureValue(exact_value().re - o.exact_value().re, exact_value().im - o.exact_value().im);
  return MeasureValue(value() - o.value());
}

MeasureValue MeasureValue::operator-() const { return MeasureValue() - *this; }

MeasureValue MeasureValue::operator*(const MeasureValue& o) const {
  if (exact() && o.exact()) {
    const auto& a = exact_value();
    const auto& b = o.exact_value();
    return MeasureValue(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  return MeasureValue(value() * o.value());
}

bool MeasureValue::operator==(const MeasureValue& o) const {
  if (exact() && o.exact()) return exact_value() == o.exact_value();
  if (exact() != o.exact()) return false;
  return value() == o.value();
}

bool MeasureValue::near(const MeasureValue& o, double tol) const {
  if (exact() && o.exact()) return exact_value() == o.exact_value();
  return std::abs(value() - o.value()) <= tol;
}

Measure::Measure(SubdivisionPtr d, GeneratorTable m) : d_(std::move(d)), m_(std::move(m)) {
  for (int i = 0; i < d_->size(); ++i)
    if (!m_.count(i)) throw std::invalid_argument("generator table is missing cell " + std::to_string(i));
  for (const auto& [k, v] : m_) {
    if (k < 0 || k >= d_->size()) throw std::invalid_argument("generator table names unknown cell " + std::to_string(k));
    exact_ = exact_ && v.exact();
  }
}

namespace {

using Memo = std::map<Bits, MeasureValue>;

// mu(X' u A) = mu(X') + m(A) - mu(X' n A), A the last maximal cell under `rank`.
MeasureValue split_value(const Subdivision& d, const GeneratorTable& m, const Bits& s, Memo& memo,
                         const std::vector<int>* rank, std::mutex* lock) {
  if (s.none()) return MeasureValue();
  if (lock) {
    std::lock_guard<std::mutex> g(*lock);
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
  } else {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
  }
  auto top = maximal_cells(d, s);
  MeasureValue v;
  if (top.size() == 1) {
    v = m.at(top[0]);
  } else {
    std::size_t pick = top.size() - 1;
    if (rank)
      for (std::size_t i = 0; i < top.size(); ++i)
        if ((*rank)[top[i]] > (*rank)[top[pick]]) pick = i;
    Bits rest(s.size());
    for (std::size_t i = 0; i < top.size(); ++i)
      if (i != pick) rest |= d.down(top[i]);
    Bits meet = rest & d.down(top[pick]);
    v = split_value(d, m, rest, memo, rank, lock) + m.at(top[pick]) - split_value(d, m, meet, memo, rank, lock);
  }
  if (lock) {
    std::lock_guard<std::mutex> g(*lock);
    memo.emplace(s, v);
  } else {
    memo.emplace(s, v);
  }
  return v;
}

}  // namespace

MeasureValue Measure::value(const Bits& closure) const { return split_value(*d_, m_, closure, memo_, nullptr, &mu_); }

void check_assumptions(const Subdivision& d) {
  const int m = d.size();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const Polytope& a = d.cell(i);
      const Polytope& b = d.cell(j);
      if (!boxes_overlap(a, b)) continue;
      if (d.cell_contains(i, j) || d.cell_contains(j, i)) {
        if (a.dim() == b.dim())
          throw AssumptionViolation("distinct cells of equal type are nested", i, j);
        continue;
      }
      auto r = intersect(a, b);
      Bits common = d.down(i) & d.down(j);
      if (!r) {
        if (common.any()) throw AssumptionViolation("disjoint cells share a cell", i, j);
        continue;
      }
      if (a.dim() == b.dim() && r->dim() == a.dim())
        throw AssumptionViolation("distinct cells of equal type meet in the same type", i, j);
      Rational vol = 0;
      for (auto k = common.find_first(); k != Bits::npos; k = common.find_next(k)) {
        const Polytope& c = d.cell(static_cast<int>(k));
        if (c.dim() == r->dim()) vol += c.chart_volume(r->chart());
      }
      if (vol != r->chart_volume(r->chart()))
        throw AssumptionViolation("intersection of cells " + std::to_string(i) + " and " + std::to_string(j) +
                                      " is not a union of cells",
                                  i, j);
    }
}

Measure extend(SubdivisionPtr d, GeneratorTable m, bool check) {
  if (check) check_assumptions(*d);
  return Measure(std::move(d), std::move(m));
}

MeasureValue evaluate(const Measure& mu, const ComplexSet& x) {
  if (x.subdivision_ptr() != mu.subdivision_ptr() && x.subdivision().cells() != mu.subdivision().cells())
    throw std::invalid_argument("evaluate: set belongs to a different subdivision");
  return mu.value(x.closure());
}

MeasureValue evaluate_presentation(const Measure& mu, const std::vector<int>& cells) {
  const Subdivision& d = mu.subdivision();
  if (cells.size() > 40) throw std::invalid_argument("evaluate_presentation: presentation too long");
  MeasureValue total;
  for (int c : cells) total += mu.generators().at(c);
  const int s = static_cast<int>(cells.size());
  // Depth-first over index sets I with |I| >= 2; empty intersections prune their supersets.
  auto walk = [&](auto&& self, int start, int size, const Bits& run) -> void {
    for (int k = start; k < s; ++k) {
      Bits next = run & d.down(cells[k]);
      if (next.none()) continue;
      if (size + 1 >= 2) {
        MeasureValue v = mu.value(next);
        if ((size + 1) % 2 == 0)
          total -= v;
        else
          total += v;
      }
      self(self, k + 1, size + 1, next);
    }
  };
  Bits all(static_cast<std::size_t>(d.size()));
  all.set();
  walk(walk, 0, 0, all);
  return total;
}

MeasureValue evaluate_in_order(const Measure& mu, const ComplexSet& x, std::uint64_t seed) {
  const Subdivision& d = mu.subdivision();
  std::vector<int> rank(static_cast<std::size_t>(d.size()));
  for (int i = 0; i < d.size(); ++i) rank[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(rank.begin(), rank.end(), rng);
  Memo memo;
  return split_value(d, mu.generators(), x.closure(), memo, &rank, nullptr);
}

std::vector<MeasureValue> atom_weights(const Measure& mu) {
  const Subdivision& d = mu.subdivision();
  std::vector<int> order(static_cast<std::size_t>(d.size()));
  for (int i = 0; i < d.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d.cell(a).dim() < d.cell(b).dim(); });
  std::vector<MeasureValue> w(static_cast<std::size_t>(d.size()));
  for (int i : order) {
    MeasureValue v = mu.generators().at(i);
    const Bits& below = d.down(i);
    for (auto j = below.find_first(); j != Bits::npos; j = below.find_next(j))
      if (static_cast<int>(j) != i) v -= w[j];
    w[i] = v;
  }
  return w;
}

GeneratorTable induced_generators(const Measure& mu, const Subdivision& fine) {
  const Subdivision& coarse = mu.subdivision();
  auto w = atom_weights(mu);
  std::vector<MeasureValue> wf(static_cast<std::size_t>(fine.size()));
  for (int c = 0; c < fine.size(); ++c) {
    Vec b = fine.cell(c).barycenter();
    int carrier = -1;
    for (int p = 0; p < coarse.size(); ++p)
      if (boxes_overlap(coarse.cell(p), fine.cell(c)) && coarse.cell(p).contains_relint(b)) {
        carrier = p;
        break;
      }
    if (carrier < 0) throw std::invalid_argument("induced_generators: fine cell outside the coarse cells");
    int parity = (coarse.cell(carrier).dim() - fine.cell(c).dim()) % 2;
    wf[c] = parity == 0 ? w[carrier] : -w[carrier];
  }
  GeneratorTable out;
  for (int c = 0; c < fine.size(); ++c) {
    MeasureValue v;
    const Bits& below = fine.down(c);
    for (auto j = below.find_first(); j != Bits::npos; j = below.find_next(j)) v += wf[j];
    out[c] = v;
  }
  return out;
}

ComplexSet transport(const ComplexSet& x, SubdivisionPtr fine) {
  std::vector<int> members;
  for (int c = 0; c < fine->size(); ++c)
    for (int r : x.reduced()) {
      const Polytope& big = x.subdivision().cell(r);
      if (boxes_overlap(big, fine->cell(c)) && big.contains(fine->cell(c))) {
        members.push_back(c);
        break;
      }
    }
  return ComplexSet(std::move(fine), std::move(members));
}

namespace {

// Closed box strictly inside the open overlap of two boxes.
std::optional<std::vector<Halfspace>> overlap_halfspaces(const Box& a, const Box& b) {
  std::vector<Halfspace> hs;
  const std::size_t n = a.lo.size();
  for (std::size_t i = 0; i < n; ++i) {
    Rational lo = a.lo[i] > b.lo[i] ? a.lo[i] : b.lo[i];
    Rational hi = a.hi[i] < b.hi[i] ? a.hi[i] : b.hi[i];
    if (lo >= hi) return std::nullopt;
    Rational margin = (hi - lo) / 64;
    hs.push_back({unit(n, i), lo + margin});
    hs.push_back({neg(unit(n, i)), -(hi - margin)});
  }
  return hs;
}

void check_overlaps(const LocalValuationCover& cover, const Subdivision& fine, double tol) {
  for (std::size_t a = 0; a < cover.boxes.size(); ++a)
    for (std::size_t b = a + 1; b < cover.boxes.size(); ++b) {
      auto hs = overlap_halfspaces(cover.boxes[a], cover.boxes[b]);
      if (!hs) continue;
      for (int c = 0; c < fine.size(); ++c) {
        auto piece = intersect(fine.cell(c), *hs);
        if (!piece) continue;
        MeasureValue va = cover.evaluators[a](*piece), vb = cover.evaluators[b](*piece);
        if (!va.near(vb, tol))
          throw OverlapIncompatible("glue: evaluators disagree on a cell in an overlap", *piece, va, vb);
      }
    }
}

}  // namespace

MeasureValue glue(const LocalValuationCover& cover, const ComplexSet& x, const GlueOptions& opt) {
  if (cover.boxes.size() != cover.evaluators.size())
    throw std::invalid_argument("glue: one evaluator per box is required");
  auto fine = std::make_shared<const Subdivision>(refine_subordinate(x.subdivision(), cover.boxes, opt.perturb));
  GeneratorTable m;
  for (int c = 0; c < fine->size(); ++c) {
    const Polytope& cell = fine->cell(c);
    std::optional<MeasureValue> first;
    for (std::size_t b = 0; b < cover.boxes.size(); ++b) {
      if (!cover.boxes[b].contains(cell)) continue;
      MeasureValue v = cover.evaluators[b](cell);
      if (!first) {
        first = v;
      } else if (!first->near(v, opt.tolerance)) {
        throw OverlapIncompatible("glue: evaluators disagree on a cell in an overlap", cell, *first, v);
      }
    }
    if (!first) throw std::logic_error("glue: refinement cell outside every box");
    m[c] = *first;
  }
  if (opt.check) check_overlaps(cover, *fine, opt.tolerance);
  Measure mu = extend(fine, std::move(m), opt.check);
  return evaluate(mu, transport(x, fine));
}

MeasureValue glue(const LocalValuationCover& cover, const Polytope& p, const GlueOptions& opt) {
  auto d = std::make_shared<const Subdivision>(face_subdivision(p));
  return glue(cover, ComplexSet(d, {d->size() - 1 >= 0 ? d->index_of(p) : 0}), opt);
}

}  // namespace polyval
