#include "polyval/subdivision.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>

namespace polyval {

struct Subdivision::Lattice {
  std::once_flag once;
  std::vector<Bits> down, up;
};

Subdivision::Subdivision(std::vector<Polytope> target, std::vector<Polytope> cells)
    : target_(std::move(target)), cells_(std::move(cells)), lattice_(std::make_shared<Lattice>()) {
  if (target_.empty()) throw std::invalid_argument("subdivision: empty target");
  n_ = target_[0].ambient_dim();
  for (const auto& t : target_)
    if (t.ambient_dim() != n_) throw std::invalid_argument("subdivision: dimension mismatch in target");
  std::set<std::vector<Vec>> seen;
  for (const auto& c : cells_) {
    if (c.ambient_dim() != n_) throw std::invalid_argument("subdivision: dimension mismatch in cells");
    if (!seen.insert(c.vertices()).second) throw std::invalid_argument("subdivision: duplicate cell");
  }
}

int Subdivision::dim() const {
  int d = -1;
  for (const auto& c : cells_) d = std::max(d, c.dim());
  return d;
}

std::vector<std::vector<int>> Subdivision::strata() const {
  std::vector<std::vector<int>> s(static_cast<std::size_t>(n_ + 1));
  for (int i = 0; i < size(); ++i) s[cells_[i].dim()].push_back(i);
  return s;
}

const Bits& Subdivision::down(int i) const {
  std::call_once(lattice_->once, [this] {
    const int m = size();
    lattice_->down.assign(m, Bits(m));
    lattice_->up.assign(m, Bits(m));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a != b && (cells_[b].dim() > cells_[a].dim() || !boxes_overlap(cells_[a], cells_[b]))) continue;
        if (a == b || cells_[a].contains(cells_[b])) {
          lattice_->down[a][b] = true;
          lattice_->up[b][a] = true;
        }
      }
  });
  return lattice_->down[i];
}

const Bits& Subdivision::up(int i) const {
  down(i);
  return lattice_->up[i];
}

int Subdivision::index_of(const Polytope& p) const {
  for (int i = 0; i < size(); ++i)
    if (cells_[i] == p) return i;
  return -1;
}

bool Subdivision::target_contains(const Vec& x) const {
  for (const auto& t : target_)
    if (t.contains(x)) return true;
  return false;
}

Subdivision Subdivision::canonical() const {
  auto cells = cells_;
  std::sort(cells.begin(), cells.end());
  return Subdivision(target_, std::move(cells));
}

Bits down_closure(const Subdivision& d, const std::vector<int>& members) {
  Bits b(static_cast<std::size_t>(d.size()));
  for (int m : members) {
    if (m < 0 || m >= d.size()) throw std::out_of_range("complex set: cell index out of range");
    b |= d.down(m);
  }
  return b;
}

std::vector<int> maximal_cells(const Subdivision& d, const Bits& closure) {
  std::vector<int> out;
  for (auto i = closure.find_first(); i != Bits::npos; i = closure.find_next(i)) {
    Bits above = d.up(static_cast<int>(i)) & closure;
    if (above.count() == 1) out.push_back(static_cast<int>(i));
  }
  return out;
}

ComplexSet::ComplexSet(SubdivisionPtr d, std::vector<int> members) : d_(std::move(d)), members_(std::move(members)) {
  closure_ = down_closure(*d_, members_);
  reduced_ = maximal_cells(*d_, closure_);
}

ComplexSet ComplexSet::from_closure(SubdivisionPtr d, const Bits& closure) {
  std::vector<int> m;
  for (auto i = closure.find_first(); i != Bits::npos; i = closure.find_next(i)) m.push_back(static_cast<int>(i));
  return ComplexSet(std::move(d), std::move(m));
}

ComplexSet ComplexSet::unite(const ComplexSet& o) const { return from_closure(d_, closure_ | o.closure_); }
ComplexSet ComplexSet::meet(const ComplexSet& o) const { return from_closure(d_, closure_ & o.closure_); }

std::vector<int> reduced_decomposition(const ComplexSet& x) { return x.reduced(); }

namespace {

Vec random_interior_point(const Polytope& r, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 97);
  Vec x = zeros(r.ambient_dim());
  Rational total = 0;
  for (const auto& v : r.vertices()) {
    Rational c = w(rng);
    x = add(x, scale(v, c));
    total += c;
  }
  return scale(x, 1 / total);
}

// A point of g outside every polytope in `covers` (each of dimension dim g inside
// aff g) and outside the relative interior of every polytope in `avoid`.
std::optional<Vec> uncovered_point(const Polytope& g, const std::vector<Polytope>& covers,
                                   const std::vector<Polytope>& avoid, std::mt19937_64& rng) {
  const int k = g.dim();
  std::vector<Polytope> regions{g};
  for (const auto& c : covers) {
    std::vector<Polytope> next;
    for (const auto& r : regions) {
      auto meet = boxes_overlap(r, c) ? intersect(r, c) : std::nullopt;
      if (!meet || meet->dim() < k) {
        next.push_back(r);
        continue;
      }
      const auto& hs = c.halfspaces();
      for (std::size_t j = 0; j < hs.size(); ++j) {
        std::vector<Halfspace> extra;
        extra.push_back({neg(hs[j].normal), -hs[j].offset});
        for (std::size_t i = 0; i < j; ++i) extra.push_back(hs[i]);
        auto piece = intersect(r, extra);
        if (piece && piece->dim() == k) next.push_back(*piece);
      }
    }
    regions = std::move(next);
    if (regions.empty()) return std::nullopt;
    if (regions.size() > 4000) break;
  }
  auto good = [&](const Vec& x) {
    for (const auto& c : covers)
      if (c.contains(x)) return false;
    for (const auto& a : avoid)
      if (a.contains_relint(x)) return false;
    return true;
  };
  for (const auto& r : regions) {
    Vec b = r.barycenter();
    if (good(b)) return b;
    for (int t = 0; t < 64; ++t) {
      Vec x = random_interior_point(r, rng);
      if (good(x)) return x;
    }
  }
  return std::nullopt;
}

Mat direction_at(const Polytope& p, const Vec& x) {
  Mat rows;
  for (const auto& h : p.halfspaces())
    if (dot(h.normal, x) == h.offset) rows.push_back(h.normal);
  for (const auto& e : p.equations()) rows.push_back(e.normal);
  return nullspace(rows, p.ambient_dim());
}

std::vector<Polytope> facets_of(const Polytope& q) {
  std::vector<Polytope> out;
  if (q.dim() == 0) return out;
  for (int f : q.faces_of_dim(q.dim() - 1)) out.push_back(q.face_polytope(f));
  return out;
}

bool pieces_within(const std::vector<Polytope>& inner, const std::vector<Polytope>& outer) {
  for (const auto& p : inner) {
    bool ok = false;
    for (const auto& q : outer)
      if (q.contains(p)) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

SubdivisionReport verify_subdivision(const Subdivision& d, std::uint64_t seed) {
  SubdivisionReport rep;
  std::mt19937_64 rng(seed);
  const int m = d.size();
  const auto& cells = d.cells();
  auto fail = [&](int cond, std::string msg, std::optional<Vec> w, std::vector<int> ids) {
    rep.ok = false;
    rep.violations.push_back({cond, std::move(msg), std::move(w), std::move(ids)});
  };

  // Cells inside the target.
  for (int i = 0; i < m; ++i) {
    bool inside = false;
    for (const auto& t : d.target())
      if (t.contains(cells[i])) { inside = true; break; }
    if (inside) continue;
    std::vector<Polytope> parts;
    for (const auto& t : d.target()) {
      auto meet = intersect(cells[i], t);
      if (meet && meet->dim() == cells[i].dim()) parts.push_back(*meet);
    }
    auto w = uncovered_point(cells[i], parts, {}, rng);
    if (w) fail(0, "cell leaves the target", w, {i});
  }

  // Condition (2).
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j || !boxes_overlap(cells[i], cells[j])) continue;
      if (cells[j].contains(cells[i])) continue;
      auto r = intersect(cells[i], cells[j]);
      if (!r) continue;
      Vec b = r->barycenter();
      if (cells[i].contains_relint(b))
        fail(2, "relative interior of a cell meets another cell that does not contain it", b, {i, j});
    }

  // Condition (1): top strata cover each target piece, facets are covered by cells.
  for (std::size_t t = 0; t < d.target().size(); ++t) {
    const Polytope& piece = d.target()[t];
    bool nested = false;
    for (std::size_t u = 0; u < d.target().size(); ++u)
      if (u != t && d.target()[u].dim() > piece.dim() && d.target()[u].contains(piece)) nested = true;
    if (nested) continue;
    std::vector<Polytope> covers;
    Rational vol = 0;
    for (const auto& c : cells) {
      if (c.dim() != piece.dim() || !boxes_overlap(c, piece)) continue;
      auto meet = intersect(c, piece);
      if (!meet || meet->dim() != piece.dim()) continue;
      vol += meet->chart_volume(piece.chart());
      covers.push_back(*meet);
    }
    if (vol != piece.chart_volume(piece.chart())) {
      auto w = uncovered_point(piece, covers, cells, rng);
      if (w || vol < piece.chart_volume(piece.chart()))
        fail(1, "target point in no relative interior", w, {});
    }
  }
  for (int i = 0; i < m; ++i) {
    for (const auto& f : facets_of(cells[i])) {
      std::vector<Polytope> covers;
      Rational vol = 0;
      for (const auto& c : cells) {
        if (c.dim() != f.dim() || !boxes_overlap(c, f) || !f.contains(c)) continue;
        vol += c.chart_volume(f.chart());
        covers.push_back(c);
      }
      if (vol == f.chart_volume(f.chart())) continue;
      auto w = uncovered_point(f, covers, cells, rng);
      if (w || vol < f.chart_volume(f.chart())) fail(1, "boundary point of a cell in no relative interior", w, {i});
    }
  }
  return rep;
}

SubdivisionReport verify_refinement(const Subdivision& fine, const Subdivision& coarse, std::uint64_t seed) {
  SubdivisionReport rep;
  for (int p = 0; p < coarse.size(); ++p) {
    const Polytope& cell = coarse.cell(p);
    std::vector<Polytope> inside;
    for (const auto& c : fine.cells())
      if (boxes_overlap(c, cell) && cell.contains(c)) inside.push_back(c);
    if (inside.empty()) {
      rep.ok = false;
      rep.violations.push_back({1, "coarse cell contains no fine cell", cell.barycenter(), {p}});
      continue;
    }
    Subdivision local({cell}, inside);
    auto r = verify_subdivision(local, seed);
    if (!r.ok) {
      rep.ok = false;
      for (auto& v : r.violations) {
        v.message = "coarse cell " + std::to_string(p) + ": " + v.message;
        v.cells = {p};
        rep.violations.push_back(std::move(v));
      }
    }
  }
  return rep;
}

namespace {

struct PairScan {
  std::vector<Polytope> meets;
};

// Intersects all cell pairs; throws NonTransversal on the first failing pair.
PairScan scan_pairs(const Subdivision& a, const Subdivision& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("subdivisions in different dimensions");
  std::vector<Polytope> pieces = a.target();
  pieces.insert(pieces.end(), b.target().begin(), b.target().end());
  PairScan out;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) {
      const Polytope& p = a.cell(i);
      const Polytope& q = b.cell(j);
      if (!boxes_overlap(p, q)) continue;
      auto r = intersect(p, q);
      if (!r) continue;
      Vec x = r->barycenter();
      if (p.contains_relint(x) && q.contains_relint(x)) {
        Mat span = p.direction();
        span.insert(span.end(), q.direction().begin(), q.direction().end());
        Mat need = span;
        for (const auto& t : pieces)
          if (t.contains(x)) {
            Mat dir = direction_at(t, x);
            need.insert(need.end(), dir.begin(), dir.end());
          }
        if (rank(need) > rank(span))
          throw NonTransversal("cells " + std::to_string(i) + " and " + std::to_string(j) + " are not transversal", i,
                               j, x);
      }
      out.meets.push_back(std::move(*r));
    }
  return out;
}

std::vector<Polytope> common_target(const Subdivision& a, const Subdivision& b) {
  if (pieces_within(a.target(), b.target())) return a.target();
  if (pieces_within(b.target(), a.target())) return b.target();
  std::vector<Polytope> out;
  for (const auto& p : a.target())
    for (const auto& q : b.target()) {
      auto r = intersect(p, q);
      if (r) out.push_back(*r);
    }
  return out;
}

}  // namespace

void check_transversal(const Subdivision& a, const Subdivision& b) { scan_pairs(a, b); }

bool transversal(const Subdivision& a, const Subdivision& b) {
  try {
    scan_pairs(a, b);
    return true;
  } catch (const NonTransversal&) {
    return false;
  }
}

Subdivision intersect_subdivisions(const Subdivision& a, const Subdivision& b) {
  auto scan = scan_pairs(a, b);
  std::set<Polytope> uniq(scan.meets.begin(), scan.meets.end());
  return Subdivision(common_target(a, b), std::vector<Polytope>(uniq.begin(), uniq.end()));
}

bool Box::contains(const Vec& x) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(lo[i] < x[i] && x[i] < hi[i])) return false;
  return true;
}

bool Box::contains(const Polytope& p) const {
  for (const auto& v : p.vertices())
    if (!contains(v)) return false;
  return true;
}

void check_cover(const std::vector<Polytope>& target, const std::vector<Box>& boxes) {
  const int n = target[0].ambient_dim();
  Vec lo = target[0].box_lo(), hi = target[0].box_hi();
  for (const auto& t : target)
    for (int i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], t.box_lo()[i]);
      hi[i] = std::max(hi[i], t.box_hi()[i]);
    }
  // Elementary pieces per axis: breakpoints (kind 0) and open gaps between them (kind 1).
  struct Piece {
    Rational a, b;
    bool point;
  };
  std::vector<std::vector<Piece>> axes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::set<Rational> br{lo[i], hi[i]};
    for (const auto& bx : boxes) {
      if (bx.lo[i] > lo[i] && bx.lo[i] < hi[i]) br.insert(bx.lo[i]);
      if (bx.hi[i] > lo[i] && bx.hi[i] < hi[i]) br.insert(bx.hi[i]);
    }
    std::vector<Rational> v(br.begin(), br.end());
    for (std::size_t k = 0; k < v.size(); ++k) {
      axes[i].push_back({v[k], v[k], true});
      if (k + 1 < v.size()) axes[i].push_back({v[k], v[k + 1], false});
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    bool covered = false;
    for (const auto& bx : boxes) {
      bool in = true;
      for (int i = 0; i < n && in; ++i) {
        const Piece& p = axes[i][idx[i]];
        in = bx.lo[i] < p.a || (!p.point && bx.lo[i] == p.a);
        in = in && (p.b < bx.hi[i] || (!p.point && bx.hi[i] == p.b));
      }
      if (in) { covered = true; break; }
    }
    if (!covered) {
      std::vector<Vec> corners{zeros(n)};
      for (int i = 0; i < n; ++i) {
        const Piece& p = axes[i][idx[i]];
        std::vector<Vec> next;
        for (auto c : corners) {
          c[i] = p.a;
          next.push_back(c);
          if (!p.point) {
            c[i] = p.b;
            next.push_back(c);
          }
        }
        corners = std::move(next);
      }
      Polytope cell = Polytope::hull(corners);
      for (const auto& t : target) {
        auto q = intersect(cell, t);
        if (!q) continue;
        Vec b = q->barycenter();
        bool in_atom = true;
        for (int i = 0; i < n; ++i) {
          const Piece& p = axes[i][idx[i]];
          in_atom = in_atom && (p.point ? b[i] == p.a : (p.a < b[i] && b[i] < p.b));
        }
        if (in_atom) throw CoverError("boxes do not cover the target", b);
      }
    }
    int k = n - 1;
    while (k >= 0 && idx[k] + 1 == axes[k].size()) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
}

Subdivision face_subdivision(const Polytope& p) {
  std::vector<Polytope> cells;
  for (int f = 0; f < static_cast<int>(p.faces().size()); ++f) cells.push_back(p.face_polytope(f));
  return Subdivision({p}, std::move(cells)).canonical();
}

Subdivision perturbed_grid(const std::vector<Polytope>& region, int N, bool kuhn, std::uint64_t seed,
                           long denominator) {
  const int n = region[0].ambient_dim();
  Vec lo = region[0].box_lo(), hi = region[0].box_hi();
  for (const auto& t : region)
    for (int i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], t.box_lo()[i]);
      hi[i] = std::max(hi[i], t.box_hi()[i]);
    }
  Vec base(n), step(n), center(n);
  for (int i = 0; i < n; ++i) {
    Rational ext = hi[i] - lo[i];
    if (ext.is_zero()) ext = 1;
    Rational margin = ext / 4;
    base[i] = lo[i] - margin;
    step[i] = (ext + 2 * margin) / N;
    center[i] = (lo[i] + hi[i]) / 2;
  }
  std::mt19937_64 rng(seed);
  const long K = std::max<long>(1, denominator / (16L * n * N));
  std::uniform_int_distribution<long> ent(-K, K);
  std::uniform_int_distribution<long> shift(-denominator / 8, denominator / 8);
  Mat E(n, Vec(n));
  Vec t(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) E[i][j] = Rational(ent(rng), denominator);
    t[i] = Rational(shift(rng), denominator) * step[i];
  }
  auto map = [&](const std::vector<int>& g) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = base[i] + step[i] * g[i] - center[i];
    Vec y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = center[i] + x[i] + t[i];
      for (int j = 0; j < n; ++j) y[i] += E[i][j] * x[j];
    }
    return y;
  };

  std::set<std::vector<std::vector<int>>> faces;  // grid-index vertex sets
  std::vector<int> cube(static_cast<std::size_t>(n), 0);
  while (true) {
    if (!kuhn) {
      // All faces of this cube: per axis fix low, fix high, or span.
      std::vector<int> choice(static_cast<std::size_t>(n), 0);
      while (true) {
        std::vector<std::vector<int>> verts{cube};
        for (int i = 0; i < n; ++i) {
          std::vector<std::vector<int>> next;
          for (auto v : verts) {
            if (choice[i] == 1) v[i] += 1;
            next.push_back(v);
            if (choice[i] == 2) {
              v[i] += 1;
              next.push_back(v);
            }
          }
          verts = std::move(next);
        }
        std::sort(verts.begin(), verts.end());
        faces.insert(verts);
        int k = n - 1;
        while (k >= 0 && choice[k] == 2) choice[k--] = 0;
        if (k < 0) break;
        ++choice[k];
      }
    } else {
      std::vector<int> perm(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) perm[i] = i;
      do {
        std::vector<std::vector<int>> simplex{cube};
        auto v = cube;
        for (int i = 0; i < n; ++i) {
          v[perm[i]] += 1;
          simplex.push_back(v);
        }
        const int s = n + 1;
        for (int mask = 1; mask < (1 << s); ++mask) {
          std::vector<std::vector<int>> sub;
          for (int j = 0; j < s; ++j)
            if (mask & (1 << j)) sub.push_back(simplex[j]);
          std::sort(sub.begin(), sub.end());
          faces.insert(sub);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    int k = n - 1;
    while (k >= 0 && cube[k] == N - 1) cube[k--] = 0;
    if (k < 0) break;
    ++cube[k];
  }
  std::vector<Polytope> cells;
  for (const auto& f : faces) {
    std::vector<Vec> pts;
    for (const auto& g : f) pts.push_back(map(g));
    cells.push_back(Polytope::hull(pts));
  }
  std::vector<Vec> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[i] = (mask & (1 << i)) ? N : 0;
    corners.push_back(map(g));
  }
  std::sort(cells.begin(), cells.end());
  return Subdivision({Polytope::hull(corners)}, std::move(cells));
}

namespace {

bool subordinate(const Subdivision& d, const std::vector<Box>& cover) {
  for (const auto& c : d.cells()) {
    bool ok = false;
    for (const auto& b : cover)
      if (b.contains(c)) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

bool grid_covers(const Subdivision& grid, const std::vector<Polytope>& region) {
  for (const auto& t : region)
    if (!grid.target()[0].contains(t)) return false;
  return true;
}

}  // namespace

Subdivision refine_subordinate(const Subdivision& d, const std::vector<Box>& cover, const PerturbOptions& opt) {
  check_cover(d.target(), cover);
  if (subordinate(d, cover)) return d;
  std::mt19937_64 seeds(opt.seed);
  for (int N = 1; N <= 256; N *= 2) {
    for (int attempt = 0; attempt < opt.retries; ++attempt) {
      Subdivision g = perturbed_grid(d.target(), N, false, seeds(), opt.denominator);
      if (!grid_covers(g, d.target())) continue;
      try {
        Subdivision r = intersect_subdivisions(d, g);
        if (subordinate(r, cover)) return r;
        break;
      } catch (const NonTransversal&) {
      }
    }
  }
  throw RetryBudgetExceeded("refine_subordinate: no subordinate refinement found");
}

Subdivision cone_triangulate(const Subdivision& d) {
  std::map<Vec, int> pool;
  std::vector<Vec> points;
  auto id = [&](const Vec& v) {
    auto it = pool.find(v);
    if (it != pool.end()) return it->second;
    int k = static_cast<int>(points.size());
    pool.emplace(v, k);
    points.push_back(v);
    return k;
  };
  std::map<std::vector<Vec>, std::vector<std::vector<int>>> memo;
  std::function<const std::vector<std::vector<int>>&(const Polytope&)> tri = [&](const Polytope& g)
      -> const std::vector<std::vector<int>>& {
    auto it = memo.find(g.vertices());
    if (it != memo.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (g.dim() == 0) {
      out.push_back({id(g.vertex(0))});
    } else {
      std::vector<std::vector<int>> boundary;
      for (const auto& f : facets_of(g)) {
        std::vector<const Polytope*> covers;
        Rational vol = 0;
        for (const auto& c : d.cells())
          if (c.dim() == f.dim() && boxes_overlap(c, f) && f.contains(c)) {
            covers.push_back(&c);
            vol += c.chart_volume(f.chart());
          }
        if (!covers.empty() && vol == f.chart_volume(f.chart())) {
          for (const Polytope* c : covers)
            for (const auto& s : tri(*c)) boundary.push_back(s);
        } else {
          for (const auto& s : tri(f)) boundary.push_back(s);
        }
      }
      int b = id(g.barycenter());
      for (auto s : boundary) {
        s.push_back(b);
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
      }
    }
    return memo.emplace(g.vertices(), std::move(out)).first->second;
  };
  std::vector<int> order(static_cast<std::size_t>(d.size()));
  for (int i = 0; i < d.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d.cell(a).dim() < d.cell(b).dim(); });
  std::set<std::vector<int>> simplices;
  for (int i : order)
    for (const auto& s : tri(d.cell(i))) {
      const int k = static_cast<int>(s.size());
      for (int mask = 1; mask < (1 << k); ++mask) {
        std::vector<int> f;
        for (int j = 0; j < k; ++j)
          if (mask & (1 << j)) f.push_back(s[j]);
        simplices.insert(f);
      }
    }
  std::vector<Polytope> cells;
  for (const auto& s : simplices) {
    std::vector<Vec> pts;
    for (int k : s) pts.push_back(points[k]);
    cells.push_back(Polytope::hull(pts));
  }
  std::sort(cells.begin(), cells.end());
  return Subdivision(d.target(), std::move(cells));
}

RefinementScheme common_refinement_scheme(const Subdivision& d1, const Subdivision& d2, const PerturbOptions& opt) {
  std::mt19937_64 seeds(opt.seed);
  std::vector<Polytope> region = d1.target();
  region.insert(region.end(), d2.target().begin(), d2.target().end());
  for (int attempt = 0; attempt < opt.retries; ++attempt) {
    Subdivision grid = perturbed_grid(region, 2, true, seeds(), opt.denominator);
    if (!grid_covers(grid, region)) continue;
    if (!transversal(d1, grid) || !transversal(d2, grid)) continue;
    Subdivision dp = intersect_subdivisions(d1, grid);
    Subdivision dpp = intersect_subdivisions(d2, grid);
    std::optional<Subdivision> restricted;
    if (d1.target().size() == 1) {
      Subdivision trivial = face_subdivision(d1.target()[0]);
      if (!transversal(trivial, grid)) continue;
      restricted = intersect_subdivisions(trivial, grid);
    }
    return {grid, restricted ? *restricted : dp, dp, dpp};
  }
  throw RetryBudgetExceeded("common_refinement_scheme: transversality not reached within " +
                            std::to_string(opt.retries) + " perturbations");
}

}  // namespace polyval
