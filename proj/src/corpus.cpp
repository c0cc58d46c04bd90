#include "polyval/corpus.hpp"

#include <algorithm>
#include <set>

namespace polyval {

std::vector<std::vector<int>> SimplicialComplex::all_faces() const {
  std::set<std::vector<int>> faces;
  for (const auto& s : top) {
    const int k = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<int> f;
      for (int j = 0; j < k; ++j)
        if (mask & (1 << j)) f.push_back(s[j]);
      std::sort(f.begin(), f.end());
      faces.insert(f);
    }
  }
  return {faces.begin(), faces.end()};
}

long SimplicialComplex::euler_characteristic() const {
  long chi = 0;
  for (const auto& f : all_faces()) chi += (f.size() % 2 == 1) ? 1 : -1;
  return chi;
}

std::vector<Polytope> SimplicialComplex::cells() const {
  std::vector<Polytope> out;
  for (const auto& f : all_faces()) {
    std::vector<Vec> pts;
    for (int i : f) pts.push_back(points[i]);
    out.push_back(Polytope::hull(pts));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Vec weighted(const std::vector<Vec>& pts, const std::vector<int>& ids, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 5);
  Vec x = zeros(static_cast<int>(pts[0].size()));
  Rational total = 0;
  for (int i : ids) {
    Rational c = w(rng);
    x = add(x, scale(pts[i], c));
    total += c;
  }
  return scale(x, 1 / total);
}

long cell_count(const SimplicialComplex& c) { return static_cast<long>(c.all_faces().size()); }

}  // namespace

SimplicialComplex random_triangulation(int n, int max_cells, std::mt19937_64& rng) {
  SimplicialComplex c;
  std::uniform_int_distribution<int> coord(-8, 8);
  while (true) {
    c.points.clear();
    for (int i = 0; i <= n; ++i) {
      Vec v;
      for (int j = 0; j < n; ++j) v.emplace_back(coord(rng), 2);
      c.points.push_back(v);
    }
    if (affine_dim(c.points) == n) break;
  }
  std::vector<int> first;
  for (int i = 0; i <= n; ++i) first.push_back(i);
  c.top.push_back(first);
  for (int guard = 0; guard < 200; ++guard) {
    SimplicialComplex next = c;
    std::uniform_int_distribution<int> pick_top(0, static_cast<int>(c.top.size()) - 1);
    std::uniform_int_distribution<int> kind(0, 1);
    const auto s = c.top[pick_top(rng)];
    if (kind(rng) == 0 || n == 3) {
      // Interior insertion into one top simplex.
      int p = static_cast<int>(next.points.size());
      next.points.push_back(weighted(c.points, s, rng));
      next.top.erase(std::find(next.top.begin(), next.top.end(), s));
      for (std::size_t skip = 0; skip < s.size(); ++skip) {
        std::vector<int> t;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != skip) t.push_back(s[j]);
        t.push_back(p);
        std::sort(t.begin(), t.end());
        next.top.push_back(t);
      }
    } else {
      // Edge insertion: split an edge of s and every triangle containing it.
      std::uniform_int_distribution<int> e(0, 2);
      int skip = e(rng);
      std::vector<int> edge;
      for (int j = 0; j < 3; ++j)
        if (j != skip) edge.push_back(s[j]);
      int p = static_cast<int>(next.points.size());
      next.points.push_back(weighted(c.points, edge, rng));
      std::vector<std::vector<int>> tops;
      for (const auto& t : c.top) {
        if (std::includes(t.begin(), t.end(), edge.begin(), edge.end())) {
          int other = -1;
          for (int v : t)
            if (v != edge[0] && v != edge[1]) other = v;
          std::vector<int> a{edge[0], other, p}, b{edge[1], other, p};
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          tops.push_back(a);
          tops.push_back(b);
        } else {
          tops.push_back(t);
        }
      }
      next.top = tops;
    }
    if (cell_count(next) > max_cells) {
      if (guard > 20) break;
      continue;
    }
    c = std::move(next);
  }
  return c;
}

SimplicialComplex kuhn_grid(int n, int k) {
  SimplicialComplex c;
  std::vector<int> g(static_cast<std::size_t>(n), 0);
  auto index = [&](const std::vector<int>& v) {
    int id = 0;
    for (int i = n - 1; i >= 0; --i) id = id * (k + 1) + v[i];
    return id;
  };
  int total = 1;
  for (int i = 0; i < n; ++i) total *= (k + 1);
  c.points.resize(static_cast<std::size_t>(total));
  for (int id = 0; id < total; ++id) {
    Vec v;
    int r = id;
    for (int i = 0; i < n; ++i) {
      v.emplace_back(r % (k + 1));
      r /= (k + 1);
    }
    c.points[id] = v;
  }
  while (true) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
      std::vector<int> s{index(g)};
      auto v = g;
      for (int i = 0; i < n; ++i) {
        v[perm[i]] += 1;
        s.push_back(index(v));
      }
      std::sort(s.begin(), s.end());
      c.top.push_back(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    int i = n - 1;
    while (i >= 0 && g[i] == k - 1) g[i--] = 0;
    if (i < 0) break;
    ++g[i];
  }
  return c;
}

SimplicialComplex random_subcomplex(const SimplicialComplex& c, double keep, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(keep);
  SimplicialComplex out;
  out.points = c.points;
  for (const auto& t : c.top)
    if (coin(rng)) out.top.push_back(t);
  if (out.top.empty()) out.top.push_back(c.top[0]);
  return out;
}

Polytope random_hull(int n, int points, std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  while (true) {
    std::vector<Vec> pts;
    for (int i = 0; i < points; ++i) {
      Vec v;
      for (int j = 0; j < n; ++j) v.emplace_back(d(rng), 2);
      pts.push_back(v);
    }
    Polytope p = Polytope::hull(pts);
    if (p.dim() == n) return p;
  }
}

Subdivision to_subdivision(const SimplicialComplex& c) {
  std::vector<Vec> used;
  for (const auto& t : c.top)
    for (int i : t) used.push_back(c.points[i]);
  return Subdivision({Polytope::hull(used)}, c.cells());
}

}  // namespace polyval
