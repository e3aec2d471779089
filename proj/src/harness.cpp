// Copyright 2025 The emul Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emul/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace emul {

namespace {

using XY = std::vector<std::pair<double, double>>;

double DrawWeight(const std::string& kind, std::mt19937_64& rng) {
  if (kind == "unit") return 1.0;
  if (kind == "uniform") return std::uniform_real_distribution<double>(1.0, 10.0)(rng);
  if (kind == "loguniform") {
    return std::exp(std::uniform_real_distribution<double>(0.0, std::log(1e6))(rng));
  }
  throw Error(ErrorKind::kBadSpec, "unknown weight distribution '" + kind + "'");
}

// Grid points (x, y) for which inside(x, y) holds, with unit lattice edges.
void Lattice(int m, const std::function<bool(int, int)>& inside, XY* xy, std::vector<Edge>* edges,
             std::vector<std::vector<int>>* id) {
  id->assign(m, std::vector<int>(m, -1));
  for (int y = 0; y < m; ++y) {
    for (int x = 0; x < m; ++x) {
      if (!inside(x, y)) continue;
      (*id)[x][y] = static_cast<int>(xy->size());
      xy->emplace_back(x, y);
    }
  }
  for (int y = 0; y < m; ++y) {
    for (int x = 0; x < m; ++x) {
      int a = (*id)[x][y];
      if (a < 0) continue;
      if (x + 1 < m && (*id)[x + 1][y] >= 0) edges->push_back({a, (*id)[x + 1][y], 1.0});
      if (y + 1 < m && (*id)[x][y + 1] >= 0) edges->push_back({a, (*id)[x][y + 1], 1.0});
    }
  }
}

double Cross(const std::pair<double, double>& o, const std::pair<double, double>& a,
             const std::pair<double, double>& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Triangulation of random points by an x-sorted sweep: each new point is
// joined to every hull vertex it sees.
void RandomTriangulation(int n, std::mt19937_64& rng, XY* xy, std::vector<Edge>* edges) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i) xy->emplace_back(u(rng), u(rng));
  std::sort(xy->begin(), xy->end());
  xy->erase(std::unique(xy->begin(), xy->end()), xy->end());
  const XY& p = *xy;
  const int m = static_cast<int>(p.size());
  if (m < 3) throw Error(ErrorKind::kBadSpec, "random triangulation needs 3 points");
  int third = 2;
  while (third < m && std::fabs(Cross(p[0], p[1], p[third])) < 1e-15) ++third;
  if (third == m) throw Error(ErrorKind::kBadSpec, "collinear points");
  // Points 2..third-1 are collinear with 0 and 1: chain them.
  std::vector<int> hull;  // counter-clockwise
  for (int i = 0; i + 1 < third; ++i) edges->push_back({i, i + 1, 1.0});
  for (int i = 0; i < third; ++i) edges->push_back({i, third, 1.0});
  if (Cross(p[0], p[third - 1], p[third]) > 0) {
    for (int i = 0; i < third; ++i) hull.push_back(i);
    hull.push_back(third);
  } else {
    hull.push_back(third);
    for (int i = third - 1; i >= 0; --i) hull.push_back(i);
  }
  for (int q = third + 1; q < m; ++q) {
    const int h = static_cast<int>(hull.size());
    std::vector<char> vis(h, 0);  // edge hull[i] -> hull[i+1] visible from q
    for (int i = 0; i < h; ++i) vis[i] = Cross(p[hull[i]], p[hull[(i + 1) % h]], p[q]) < -1e-15;
    int s = -1;
    for (int i = 0; i < h; ++i)
      if (vis[i] && !vis[(i + h - 1) % h]) s = i;
    if (s < 0) continue;  // degenerate; the point stays isolated
    int e = s;
    while (vis[e % h]) ++e;
    // Edges s..e-1 are visible, so vertices s..e see q.
    for (int i = s; i <= e; ++i) edges->push_back({hull[i % h], q, 1.0});
    std::vector<int> nh;
    for (int i = e; i <= s + h; ++i) nh.push_back(hull[i % h]);
    nh.push_back(q);
    hull = std::move(nh);
  }
  // Re-index without points skipped as degenerate.
  std::vector<int> deg(m, 0);
  for (const Edge& e : *edges) deg[e.u]++, deg[e.v]++;
  std::vector<int> remap(m, -1);
  XY kept;
  for (int i = 0; i < m; ++i) {
    if (deg[i] == 0) continue;
    remap[i] = static_cast<int>(kept.size());
    kept.push_back(p[i]);
  }
  for (Edge& e : *edges) e = {remap[e.u], remap[e.v], e.w};
  *xy = kept;
}

std::vector<int> SampleDistinct(const std::vector<int>& pool, int k, std::mt19937_64& rng) {
  if (k > static_cast<int>(pool.size())) {
    throw Error(ErrorKind::kBadSpec, "more terminals than candidate vertices");
  }
  std::vector<int> v = pool;
  // Partial Fisher-Yates with explicit draws (std::shuffle is not portable
  // across standard libraries).
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng() % (v.size() - i));
    std::swap(v[i], v[j]);
  }
  v.resize(k);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

Instance Generate(const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  XY xy;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> id;
  const int m = spec.m;
  if (m < 2) throw Error(ErrorKind::kBadSpec, "size parameter below 2");
  int inner_lo = -1, inner_hi = -1;
  if (spec.family == "grid" || spec.family == "overlay" || spec.family == "spread-stress") {
    Lattice(m, [](int, int) { return true; }, &xy, &edges, &id);
    if (spec.family == "overlay") {
      for (int y = 0; y + 1 < m; ++y) {
        for (int x = 0; x + 1 < m; ++x) {
          if (rng() & 1) {
            edges.push_back({id[x][y], id[x + 1][y + 1], 1.0});
          } else {
            edges.push_back({id[x + 1][y], id[x][y + 1], 1.0});
          }
        }
      }
    }
  } else if (spec.family == "halved-grid") {
    Lattice(m, [](int x, int y) { return y <= x; }, &xy, &edges, &id);
  } else if (spec.family == "annulus") {
    if (m < 5) throw Error(ErrorKind::kBadSpec, "annulus needs m >= 5");
    inner_lo = m / 3;
    inner_hi = m - 1 - m / 3;
    Lattice(m, [&](int x, int y) {
      return !(x > inner_lo && x < inner_hi && y > inner_lo && y < inner_hi);
    }, &xy, &edges, &id);
    if (inner_hi - inner_lo < 2) throw Error(ErrorKind::kBadSpec, "annulus hole is empty");
  } else if (spec.family == "random-triangulation") {
    RandomTriangulation(m, rng, &xy, &edges);
  } else {
    throw Error(ErrorKind::kBadSpec, "unknown family '" + spec.family + "'");
  }
  for (Edge& e : edges) {
    e.w = DrawWeight(spec.weights, rng);
    if (spec.family == "spread-stress") {
      int half = m / 2;
      const auto& a = xy[e.u];
      const auto& b = xy[e.v];
      if (std::min(a.first, b.first) == half - 1 && std::max(a.first, b.first) == half &&
          a.second == b.second) {
        e.w = spec.gap;
      }
    }
  }
  PlaneGraph g = PlaneGraph::FromCoordinates(xy, std::move(edges));
  if (spec.k < 0) throw Error(ErrorKind::kBadSpec, "negative terminal count");

  if (spec.placement == "random") {
    std::vector<int> all(g.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    return MakeGeneral(std::move(g), SampleDistinct(all, spec.k, rng));
  }
  if (spec.placement == "holes") {
    if (spec.family != "annulus") throw Error(ErrorKind::kBadSpec, "holes placement needs annulus");
    std::vector<int> inner;
    for (int v = 0; v < g.num_vertices(); ++v) {
      auto [x, y] = xy[v];
      bool on_ring = x >= inner_lo && x <= inner_hi && y >= inner_lo && y <= inner_hi &&
                     (x == inner_lo || x == inner_hi || y == inner_lo || y == inner_hi);
      if (on_ring) inner.push_back(v);
    }
    std::vector<int> outer = FaceVertices(g, g.outer_face());
    std::sort(outer.begin(), outer.end());
    int k_out = spec.k - spec.k / 2;
    auto a = SampleDistinct(outer, k_out, rng);
    auto b = SampleDistinct(inner, spec.k / 2, rng);
    std::vector<std::vector<int>> holes{a};
    if (!b.empty()) holes.push_back(b);
    Instance in = MakeHoles(std::move(g), holes);
    // Order every hole along its face.
    for (int h = 0; h < in.num_holes(); ++h) {
      auto order = in.CircularOrder(h);
      std::vector<int> idx;
      for (int i = 0; i < in.k(); ++i)
        if (in.hole[i] == h) idx.push_back(i);
      std::vector<int> t, d;
      for (int i : order) t.push_back(in.terms[i]), d.push_back(in.tdart[i]);
      for (size_t z = 0; z < idx.size(); ++z) in.terms[idx[z]] = t[z], in.tdart[idx[z]] = d[z];
    }
    return in;
  }
  if (spec.placement != "boundary") {
    throw Error(ErrorKind::kBadSpec, "unknown placement '" + spec.placement + "'");
  }
  std::vector<int> outer = FaceVertices(g, g.outer_face());
  std::sort(outer.begin(), outer.end());
  return MakeOneHole(std::move(g), SampleDistinct(outer, spec.k, rng));
}

std::vector<std::vector<double>> ExactOracle(const Instance& in) {
  const PlaneGraph& g = in.g;
  const int n = g.num_vertices();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }
  std::vector<std::vector<double>> out(in.k(), std::vector<double>(in.k(), kInf));
  std::vector<double> dist(n);
  using Item = std::pair<double, int>;
  for (int i = 0; i < in.k(); ++i) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[in.terms[i]] = 0;
    pq.push({0, in.terms[i]});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (auto [u, w] : adj[v]) {
        if (d + w < dist[u]) {
          dist[u] = d + w;
          pq.push({dist[u], u});
        }
      }
    }
    for (int j = 0; j < in.k(); ++j) out[i][j] = dist[in.terms[j]];
  }
  return out;
}

nlohmann::json VerificationReport::ToJson() const {
  return {{"pass", pass},
          {"eps", eps},
          {"max_log_distortion", max_log},
          {"mean_log_distortion", mean_log},
          {"worst_pair", {worst_i, worst_j}},
          {"pairs", pairs},
          {"original_vertices", original_vertices},
          {"emulator_vertices", emulator_vertices},
          {"emulator_edges", emulator_edges}};
}

VerificationReport VerifyEmulator(const Instance& original, const Instance& emulator, double eps,
                                  const std::vector<std::vector<double>>* original_dist) {
  if (original.k() != emulator.k()) {
    throw Error(ErrorKind::kTerminalMismatch,
                "original has " + std::to_string(original.k()) + " terminals, emulator " +
                    std::to_string(emulator.k()));
  }
  std::vector<std::vector<double>> own;
  if (!original_dist) {
    own = ExactOracle(original);
    original_dist = &own;
  }
  auto de = ExactOracle(emulator);
  VerificationReport rep;
  rep.eps = eps;
  rep.original_vertices = original.g.num_vertices();
  rep.emulator_vertices = emulator.g.num_vertices();
  rep.emulator_edges = emulator.g.num_edges();
  const double lo = std::exp(-eps) * (1 - 1e-9), hi = std::exp(eps) * (1 + 1e-9);
  double sum = 0;
  for (int i = 0; i < original.k(); ++i) {
    for (int j = i + 1; j < original.k(); ++j) {
      double a = (*original_dist)[i][j], b = de[i][j];
      double lr;
      bool ok;
      if (a == b) {
        lr = 0;
        ok = true;
      } else if (a <= 0 || b <= 0 || a == kInf || b == kInf) {
        lr = kInf;
        ok = false;
      } else {
        lr = std::fabs(std::log(b / a));
        ok = b >= lo * a && b <= hi * a;
      }
      rep.pairs++;
      sum += std::isfinite(lr) ? lr : 0;
      if (!ok) rep.pass = false;
      if (lr > rep.max_log || rep.worst_i < 0) {
        rep.max_log = std::max(rep.max_log, lr);
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  }
  rep.mean_log = rep.pairs ? sum / rep.pairs : 0;
  return rep;
}

}  // namespace emul
