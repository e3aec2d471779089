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

#include "emul/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

namespace emul {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonPlanarEmbedding: return "NonPlanarEmbedding";
    case ErrorKind::kNegativeWeight: return "NegativeWeight";
    case ErrorKind::kDisconnectedInput: return "DisconnectedInput";
    case ErrorKind::kUnreachable: return "Unreachable";
    case ErrorKind::kPathNotOnOuterStructure: return "PathNotOnOuterStructure";
    case ErrorKind::kMalformedPath: return "MalformedPath";
    case ErrorKind::kCrossingPairs: return "CrossingPairs";
    case ErrorKind::kInvalidPortalSet: return "InvalidPortalSet";
    case ErrorKind::kInconsistentCopyLabels: return "InconsistentCopyLabels";
    case ErrorKind::kNoBalancedPair: return "NoBalancedPair";
    case ErrorKind::kHierarchyInconsistent: return "HierarchyInconsistent";
    case ErrorKind::kDistortionBudgetExceeded: return "DistortionBudgetExceeded";
    case ErrorKind::kSameHoleEndpoints: return "SameHoleEndpoints";
    case ErrorKind::kTerminalOnPathInterior: return "TerminalOnPathInterior";
    case ErrorKind::kRTooSmall: return "RTooSmall";
    case ErrorKind::kPreconditionKTooLarge: return "PreconditionKTooLarge";
    case ErrorKind::kUnknownTerminal: return "UnknownTerminal";
    case ErrorKind::kTerminalMismatch: return "TerminalMismatch";
    case ErrorKind::kBadSpec: return "BadSpec";
  }
  return "Unknown";
}

namespace {

struct DisjointSets {
  explicit DisjointSets(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int Find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void Union(int a, int b) { p[Find(a)] = Find(b); }
  std::vector<int> p;
};

}  // namespace

PlaneGraph PlaneGraph::Build(int n, std::vector<Edge> edges,
                             std::vector<std::vector<int>> rotations, int outer_dart,
                             bool require_connected) {
  PlaneGraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.rotation_ = std::move(rotations);
  g.outer_dart_ = outer_dart;
  g.Finish(require_connected);
  return g;
}

PlaneGraph PlaneGraph::FromCoordinates(const std::vector<std::pair<double, double>>& xy,
                                       std::vector<Edge> edges, int outer_dart) {
  const int n = static_cast<int>(xy.size());
  std::vector<std::vector<int>> rot(n);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    rot[edges[e].u].push_back(2 * e);
    rot[edges[e].v].push_back(2 * e + 1);
  }
  auto angle = [&](int d) {
    const Edge& e = edges[d >> 1];
    int a = (d & 1) ? e.v : e.u;
    int b = (d & 1) ? e.u : e.v;
    return std::atan2(xy[b].second - xy[a].second, xy[b].first - xy[a].first);
  };
  for (auto& r : rot) {
    std::sort(r.begin(), r.end(), [&](int a, int b) {
      double x = angle(a), y = angle(b);
      return x != y ? x < y : a < b;
    });
  }
  PlaneGraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.rotation_ = std::move(rot);
  g.outer_dart_ = -1;
  g.Finish(true);
  if (outer_dart >= 0) return g.WithOuterDart(outer_dart);
  // Default outer face: the face on the right of the dart leaving the
  // lowest-leftmost vertex in the direction just after the downward ray.
  if (g.num_edges() > 0) {
    int best = 0;
    for (int v = 1; v < n; ++v) {
      if (xy[v].second < xy[best].second ||
          (xy[v].second == xy[best].second && xy[v].first < xy[best].first)) {
        if (g.degree(v) > 0) best = v;
      }
    }
    // All neighbours of the lowest-leftmost vertex have angle in [0, pi];
    // the outer face is the corner between the last and the first dart in
    // ccw order, i.e. before the first dart.
    return g.WithOuterDart(g.rotation_[best].front());
  }
  return g;
}

PlaneGraph PlaneGraph::WithOuterDart(int d) const {
  PlaneGraph g = *this;
  g.outer_dart_ = d;
  if (d >= 0) {
    int f = face_of_[d];
    auto& walk = g.face_walks_[f];
    auto it = std::find(walk.begin(), walk.end(), d);
    std::rotate(walk.begin(), it, walk.end());
  }
  return g;
}

void PlaneGraph::Finish(bool require_connected) {
  const int m = num_edges();
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw Error(ErrorKind::kNonPlanarEmbedding, "edge endpoint out of range");
    }
    if (!(e.w >= 0) || !std::isfinite(e.w)) {
      throw Error(ErrorKind::kNegativeWeight, "edge weight " + std::to_string(e.w));
    }
  }
  if (static_cast<int>(rotation_.size()) != n_) {
    throw Error(ErrorKind::kNonPlanarEmbedding, "rotation count differs from n");
  }
  rot_next_.assign(2 * m, -1);
  rot_prev_.assign(2 * m, -1);
  rot_index_.assign(2 * m, -1);
  for (int v = 0; v < n_; ++v) {
    const auto& r = rotation_[v];
    for (int i = 0; i < static_cast<int>(r.size()); ++i) {
      int d = r[i];
      if (d < 0 || d >= 2 * m || origin(d) != v || rot_index_[d] != -1) {
        throw Error(ErrorKind::kNonPlanarEmbedding,
                    "rotation of vertex " + std::to_string(v) + " is not a permutation");
      }
      rot_index_[d] = i;
      rot_next_[d] = r[(i + 1) % r.size()];
      rot_prev_[d] = r[(i + r.size() - 1) % r.size()];
    }
  }
  for (int d = 0; d < 2 * m; ++d) {
    if (rot_index_[d] == -1) {
      throw Error(ErrorKind::kNonPlanarEmbedding, "dart missing from rotation");
    }
  }
  face_of_.assign(2 * m, -1);
  face_walks_.clear();
  for (int d0 = 0; d0 < 2 * m; ++d0) {
    if (face_of_[d0] != -1) continue;
    std::vector<int> walk;
    int d = d0;
    do {
      face_of_[d] = static_cast<int>(face_walks_.size());
      walk.push_back(d);
      d = next_in_face(d);
    } while (d != d0);
    face_walks_.push_back(std::move(walk));
  }
  if (outer_dart_ >= 2 * m) {
    throw Error(ErrorKind::kNonPlanarEmbedding, "outer dart out of range");
  }
  if (outer_dart_ >= 0) {
    auto& walk = face_walks_[face_of_[outer_dart_]];
    std::rotate(walk.begin(), std::find(walk.begin(), walk.end(), outer_dart_), walk.end());
  }
  // Euler per component.
  DisjointSets ds(n_);
  for (const Edge& e : edges_) ds.Union(e.u, e.v);
  std::vector<long> vcount(n_, 0), ecount(n_, 0), fcount(n_, 0);
  for (int v = 0; v < n_; ++v) vcount[ds.Find(v)]++;
  for (const Edge& e : edges_) ecount[ds.Find(e.u)]++;
  for (const auto& walk : face_walks_) fcount[ds.Find(origin(walk[0]))]++;
  int comps = 0;
  for (int v = 0; v < n_; ++v) {
    if (ds.Find(v) != v) continue;
    ++comps;
    long f = std::max<long>(fcount[v], 1);
    if (vcount[v] - ecount[v] + f != 2) {
      throw Error(ErrorKind::kNonPlanarEmbedding,
                  "Euler check failed: V-E+F=" + std::to_string(vcount[v] - ecount[v] + f));
    }
  }
  if (require_connected && comps > 1) {
    throw Error(ErrorKind::kDisconnectedInput, std::to_string(comps) + " components");
  }
}

std::vector<int> PlaneGraph::Components(int* count) const {
  DisjointSets ds(n_);
  for (const Edge& e : edges_) ds.Union(e.u, e.v);
  std::vector<int> id(n_, -1), comp(n_);
  int c = 0;
  for (int v = 0; v < n_; ++v) {
    int r = ds.Find(v);
    if (id[r] == -1) id[r] = c++;
    comp[v] = id[r];
  }
  if (count) *count = c;
  return comp;
}

std::vector<int> Path::Vertices(const PlaneGraph& g) const {
  std::vector<int> vs;
  if (s < 0) return vs;
  vs.push_back(s);
  for (int d : darts) vs.push_back(g.head(d));
  return vs;
}

ShortestPathTree::ShortestPathTree(const PlaneGraph& g, int source, const SearchOptions& opt)
    : g_(&g), opt_(opt), source_(source) {
  const int n = g.num_vertices();
  dist_.assign(n, kInf);
  hops_.assign(n, 0);
  pdart_.assign(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::tuple<double, int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist_[source] = 0;
  pq.emplace(0.0, 0, source);
  while (!pq.empty()) {
    auto [d, h, u] = pq.top();
    pq.pop();
    if (done[u] || d != dist_[u] || h != hops_[u]) continue;
    done[u] = 1;
    if (u != source && opt.blocked && (*opt.blocked)[u]) continue;
    for (int dart : g.rotation(u)) {
      if (opt.edge_ok && !(*opt.edge_ok)[PlaneGraph::edge_of(dart)]) continue;
      int v = g.head(dart);
      if (done[v]) continue;
      double nd = d + g.weight(dart);
      int nh = h + 1;
      if (nd < dist_[v] || (nd == dist_[v] && nh < hops_[v])) {
        dist_[v] = nd;
        hops_[v] = nh;
        pdart_[v] = dart;
        pq.emplace(nd, nh, v);
      } else if (nd == dist_[v] && nh == hops_[v]) {
        if (Prefer(u, dart, g.origin(pdart_[v]), pdart_[v])) pdart_[v] = dart;
      }
    }
  }
}

bool ShortestPathTree::Prefer(int a, int da, int b, int db) const {
  auto vkey = [&](int v) {
    return std::make_pair(opt_.vertex_key ? (*opt_.vertex_key)[v] : v, v);
  };
  if (a == b) {
    int ea = PlaneGraph::edge_of(da), eb = PlaneGraph::edge_of(db);
    auto ka = std::make_pair(opt_.edge_key ? (*opt_.edge_key)[ea] : ea, ea);
    auto kb = std::make_pair(opt_.edge_key ? (*opt_.edge_key)[eb] : eb, eb);
    return ka < kb;
  }
  // Both branches have the same hop count, so climbing in lockstep meets
  // at the lowest common ancestor.
  std::pair<int, int> ma{INT32_MAX, INT32_MAX}, mb{INT32_MAX, INT32_MAX};
  int x = a, y = b;
  while (x != y) {
    ma = std::min(ma, vkey(x));
    mb = std::min(mb, vkey(y));
    x = g_->origin(pdart_[x]);
    y = g_->origin(pdart_[y]);
  }
  return ma < mb;
}

Path ShortestPathTree::PathTo(int v) const {
  if (!reached(v)) {
    throw Error(ErrorKind::kUnreachable,
                std::to_string(v) + " from " + std::to_string(source_));
  }
  Path p;
  p.s = source_;
  p.t = v;
  p.weight = dist_[v];
  for (int x = v; x != source_; x = g_->origin(pdart_[x])) p.darts.push_back(pdart_[x]);
  std::reverse(p.darts.begin(), p.darts.end());
  return p;
}

Path ShortestPath(const PlaneGraph& g, int s, int t, const SearchOptions& opt) {
  return ShortestPathTree(g, s, opt).PathTo(t);
}

std::vector<std::vector<double>> AllTerminalDistances(const PlaneGraph& g,
                                                      const std::vector<int>& terminals) {
  const int k = static_cast<int>(terminals.size());
  std::vector<std::vector<double>> d(k, std::vector<double>(k, 0));
  for (int i = 0; i < k; ++i) {
    ShortestPathTree t(g, terminals[i]);
    for (int j = 0; j < k; ++j) d[i][j] = t.dist(terminals[j]);
  }
  return d;
}

std::vector<int> CutVertices(const PlaneGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> tin(n, -1), low(n, 0), out;
  std::vector<char> is_cut(n, 0);
  int timer = 0;
  for (int root = 0; root < n; ++root) {
    if (tin[root] != -1) continue;
    // Frame: vertex, entering edge, next rotation index.
    std::vector<std::tuple<int, int, int>> stack;
    stack.emplace_back(root, -1, 0);
    tin[root] = low[root] = timer++;
    int root_children = 0;
    while (!stack.empty()) {
      auto& [v, pe, i] = stack.back();
      if (i < g.degree(v)) {
        int d = g.rotation(v)[i++];
        int e = PlaneGraph::edge_of(d);
        if (e == pe) continue;
        int w = g.head(d);
        if (tin[w] == -1) {
          tin[w] = low[w] = timer++;
          if (v == root) ++root_children;
          stack.emplace_back(w, e, 0);
        } else {
          low[v] = std::min(low[v], tin[w]);
        }
      } else {
        int child = v;
        stack.pop_back();
        if (stack.empty()) break;
        int parent = std::get<0>(stack.back());
        low[parent] = std::min(low[parent], low[child]);
        if (parent != root && low[child] >= tin[parent]) is_cut[parent] = 1;
      }
    }
    if (root_children > 1) is_cut[root] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (is_cut[v]) out.push_back(v);
  return out;
}

std::vector<int> OuterRepeatedVertices(const PlaneGraph& g) {
  std::vector<int> cnt(g.num_vertices(), 0), out;
  if (g.outer_face() < 0) return out;
  for (int d : g.face_walk(g.outer_face())) cnt[g.origin(d)]++;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (cnt[v] > 1) out.push_back(v);
  return out;
}

std::vector<int> FaceVertices(const PlaneGraph& g, int f) {
  std::vector<int> out;
  std::vector<char> seen(g.num_vertices(), 0);
  for (int d : g.face_walk(f)) {
    int v = g.origin(d);
    if (!seen[v]) {
      seen[v] = 1;
      out.push_back(v);
    }
  }
  return out;
}

int SubgraphResult::MapCorner(const PlaneGraph& old, int d) const {
  int x = d;
  do {
    if (dmap[x] >= 0) return dmap[x];
    x = old.rot(x);
  } while (x != d);
  return -1;
}

SubgraphResult EdgeSubgraph(const PlaneGraph& g, const std::vector<char>& keep_edge,
                            const std::vector<char>* keep_vertex, bool require_connected) {
  SubgraphResult r;
  const int n = g.num_vertices();
  std::vector<char> keepv(n, 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (keep_edge[e]) keepv[g.edge(e).u] = keepv[g.edge(e).v] = 1;
  }
  if (keep_vertex) {
    for (int v = 0; v < n; ++v) keepv[v] |= (*keep_vertex)[v];
  }
  r.vmap.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (keepv[v]) {
      r.vmap[v] = static_cast<int>(r.vorig.size());
      r.vorig.push_back(v);
    }
  }
  std::vector<Edge> edges;
  r.dmap.assign(g.num_darts(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!keep_edge[e]) continue;
    int ne = static_cast<int>(edges.size());
    edges.push_back({r.vmap[g.edge(e).u], r.vmap[g.edge(e).v], g.edge(e).w});
    r.dmap[2 * e] = 2 * ne;
    r.dmap[2 * e + 1] = 2 * ne + 1;
    r.dorig.push_back(2 * e);
    r.dorig.push_back(2 * e + 1);
  }
  std::vector<std::vector<int>> rot(r.vorig.size());
  for (int nv = 0; nv < static_cast<int>(r.vorig.size()); ++nv) {
    for (int d : g.rotation(r.vorig[nv]))
      if (r.dmap[d] >= 0) rot[nv].push_back(r.dmap[d]);
  }
  int outer = -1;
  if (!edges.empty() && g.outer_face() >= 0) {
    for (int d : g.face_walk(g.outer_face())) {
      if (!keepv[g.origin(d)]) continue;
      outer = r.MapCorner(g, d);
      if (outer >= 0) break;
    }
  }
  if (!edges.empty() && outer < 0) outer = 0;
  r.g = PlaneGraph::Build(static_cast<int>(r.vorig.size()), std::move(edges), std::move(rot),
                          outer, require_connected);
  return r;
}

SliceResult Slice(const PlaneGraph& g, const SliceSpec& spec) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  SliceResult res;
  // Token: (dart, kind) where kind 0 = plain, 1 = start copy, 2 = end copy.
  struct Token {
    int dart;
    int kind;
  };
  std::vector<std::vector<Token>> run_tokens;
  res.runs.assign(n, {});
  for (int v = 0; v < n; ++v) {
    const auto& R = g.rotation(v);
    const int deg = static_cast<int>(R.size());
    auto is_f = [&](int i) { return spec.fedge[PlaneGraph::edge_of(R[i])] != 0; };
    auto corner_cut = [&](int i) { return spec.identified[v] && spec.cut_corner[R[i]]; };
    auto new_run = [&]() {
      res.runs[v].push_back(static_cast<int>(run_tokens.size()));
      res.vorig.push_back(v);
      run_tokens.emplace_back();
      return &run_tokens.back();
    };
    // Events: 2i = dart i, 2i+1 = corner after dart i.
    int start = -1;
    for (int ev = 0; ev < 2 * deg && start < 0; ++ev) {
      int i = ev / 2;
      if ((ev % 2 == 0 && is_f(i)) || (ev % 2 == 1 && corner_cut(i))) start = ev;
    }
    if (start < 0) {
      auto* run = new_run();
      for (int d : R) run->push_back({d, 0});
      continue;
    }
    new_run();
    int cur = static_cast<int>(run_tokens.size()) - 1;
    if (start % 2 == 0) run_tokens[cur].push_back({R[start / 2], 1});
    for (int step = 1; step <= 2 * deg; ++step) {
      int ev = (start + step) % (2 * deg);
      int i = ev / 2;
      bool last = step == 2 * deg;
      if (ev % 2 == 0) {
        if (is_f(i)) {
          run_tokens[cur].push_back({R[i], 2});
          if (last) break;
          new_run();
          cur = static_cast<int>(run_tokens.size()) - 1;
          run_tokens[cur].push_back({R[i], 1});
        } else {
          run_tokens[cur].push_back({R[i], 0});
        }
      } else if (corner_cut(i)) {
        if (last) break;
        new_run();
        cur = static_cast<int>(run_tokens.size()) - 1;
      }
    }
  }
  const int nv = static_cast<int>(run_tokens.size());
  // New edge ids: plain edges keep one copy, fedges get copies A and B.
  std::vector<int> plain_id(m, -1), copy_a(m, -1), copy_b(m, -1);
  std::vector<Edge> edges;
  std::vector<int> edge_orig;
  for (int e = 0; e < m; ++e) {
    if (spec.fedge[e]) {
      copy_a[e] = static_cast<int>(edges.size());
      edges.push_back(g.edge(e));
      edge_orig.push_back(e);
      copy_b[e] = static_cast<int>(edges.size());
      edges.push_back(g.edge(e));
      edge_orig.push_back(e);
    } else {
      plain_id[e] = static_cast<int>(edges.size());
      edges.push_back(g.edge(e));
      edge_orig.push_back(e);
    }
  }
  auto new_dart = [&](const Token& t) {
    int e = PlaneGraph::edge_of(t.dart);
    int p = t.dart & 1;
    if (t.kind == 0) return 2 * plain_id[e] + p;
    bool side_a = (t.kind == 1) == (p == 0);
    return 2 * (side_a ? copy_a[e] : copy_b[e]) + p;
  };
  std::vector<std::vector<int>> rot(nv);
  res.first_dart.assign(nv, -1);
  res.corner_owner.assign(g.num_darts(), -1);
  res.corner_dart.assign(g.num_darts(), -1);
  res.dmap.assign(g.num_darts(), -1);
  for (int r = 0; r < nv; ++r) {
    for (const Token& t : run_tokens[r]) {
      int nd = new_dart(t);
      int ne = nd >> 1;
      if (nd & 1) {
        edges[ne].v = r;
      } else {
        edges[ne].u = r;
      }
      rot[r].push_back(nd);
      if (t.kind != 2) res.dmap[t.dart] = nd;
      // The corner before an fedge dart sits next to its end copy.
      if (t.kind != 1) {
        res.corner_owner[t.dart] = r;
        res.corner_dart[t.dart] = nd;
      }
    }
    if (!rot[r].empty()) res.first_dart[r] = rot[r].front();
  }
  res.dorig.resize(2 * edges.size());
  for (int ne = 0; ne < static_cast<int>(edges.size()); ++ne) {
    res.dorig[2 * ne] = 2 * edge_orig[ne];
    res.dorig[2 * ne + 1] = 2 * edge_orig[ne] + 1;
  }
  res.g = PlaneGraph::Build(nv, std::move(edges), std::move(rot), -1, false);
  res.comp = res.g.Components(&res.num_comps);
  return res;
}

SliceResult SliceAlongPath(const PlaneGraph& g, const Path& p) {
  if (p.s < 0 || p.darts.empty()) throw Error(ErrorKind::kMalformedPath, "empty path");
  std::vector<char> seen(g.num_vertices(), 0);
  int at = p.s;
  seen[at] = 1;
  for (int d : p.darts) {
    if (d < 0 || d >= g.num_darts() || g.origin(d) != at) {
      throw Error(ErrorKind::kMalformedPath, "darts are not consecutive");
    }
    at = g.head(d);
    if (seen[at]) throw Error(ErrorKind::kMalformedPath, "path is not simple");
    seen[at] = 1;
  }
  if (at != p.t) throw Error(ErrorKind::kMalformedPath, "endpoint mismatch");
  const int of = g.outer_face();
  auto on_outer = [&](int v) {
    for (int d : g.rotation(v))
      if (g.face(d) == of) return true;
    return false;
  };
  if (!on_outer(p.s) || !on_outer(p.t)) {
    throw Error(ErrorKind::kPathNotOnOuterStructure, "endpoint not on the outer face");
  }
  SliceSpec spec;
  spec.fedge.assign(g.num_edges(), 0);
  spec.identified.assign(g.num_vertices(), 0);
  spec.cut_corner.assign(g.num_darts(), 0);
  for (int d : p.darts) spec.fedge[PlaneGraph::edge_of(d)] = 1;
  for (int v : {p.s, p.t}) {
    spec.identified[v] = 1;
    // Outer corners not touching the path: a corner flush against the
    // path would only peel off the copy of a boundary edge.
    for (int d : g.rotation(v)) {
      int nd = g.rot(d);
      if (g.face(nd) != of) continue;
      if (spec.fedge[PlaneGraph::edge_of(d)] || spec.fedge[PlaneGraph::edge_of(nd)]) continue;
      spec.cut_corner[d] = 1;
    }
  }
  return Slice(g, spec);
}

int EmbeddingBuilder::AddVertex() {
  rotations_.emplace_back();
  return static_cast<int>(rotations_.size()) - 1;
}

int EmbeddingBuilder::AddVertices(int count) {
  int first = num_vertices();
  rotations_.resize(rotations_.size() + count);
  return first;
}

int EmbeddingBuilder::AddEdge(int u, int v, double w) {
  edges_.push_back({u, v, w});
  return 2 * (static_cast<int>(edges_.size()) - 1);
}

void EmbeddingBuilder::SetRotation(int v, std::vector<int> darts) {
  rotations_[v] = std::move(darts);
}

PlaneGraph EmbeddingBuilder::Build(int outer_dart, bool require_connected) const {
  return PlaneGraph::Build(num_vertices(), edges_, rotations_, outer_dart, require_connected);
}

EmbeddingEditor::EmbeddingEditor(const PlaneGraph& g)
    : edges_(g.edges()), alive_(g.num_edges(), 1), rot_(g.num_vertices()) {
  for (int v = 0; v < g.num_vertices(); ++v) rot_[v] = g.rotation(v);
}

int EmbeddingEditor::Track(int dart) {
  tracked_.push_back(dart);
  return static_cast<int>(tracked_.size()) - 1;
}

void EmbeddingEditor::Erase(int d) {
  auto& r = rot_[origin(d)];
  auto it = std::find(r.begin(), r.end(), d);
  int succ = -1;
  if (r.size() > 1) {
    auto nx = std::next(it) == r.end() ? r.begin() : std::next(it);
    succ = *nx;
    // The successor might be the twin of d on a loop; callers erase both.
  }
  r.erase(it);
  for (int& t : tracked_) {
    if (t == d) t = succ;
  }
}

void EmbeddingEditor::RemoveEdge(int e) {
  if (!alive_[e]) return;
  alive_[e] = 0;
  Erase(2 * e);
  Erase(2 * e + 1);
  // A tracked dart could have moved onto the twin just erased.
  for (int& t : tracked_) {
    if (t >= 0 && !alive_[t >> 1]) {
      t = rot_[origin(t)].empty() ? -1 : rot_[origin(t)].front();
    }
  }
}

bool EmbeddingEditor::SuppressVertex(int v) {
  if (rot_[v].size() != 2) return false;
  int a = rot_[v][0], b = rot_[v][1];
  if ((a >> 1) == (b >> 1)) {  // a loop at v
    RemoveEdge(a >> 1);
    return false;
  }
  int x = head(a), y = head(b);
  if (x == y) {
    RemoveEdge(a >> 1);
    RemoveEdge(b >> 1);
    return false;
  }
  int ne = static_cast<int>(edges_.size());
  edges_.push_back({x, y, weight(a) + weight(b)});
  alive_.push_back(1);
  auto replace = [&](int old_d, int new_d) {
    auto& r = rot_[origin(old_d)];
    *std::find(r.begin(), r.end(), old_d) = new_d;
    for (int& t : tracked_)
      if (t == old_d) t = new_d;
  };
  replace(a ^ 1, 2 * ne);
  replace(b ^ 1, 2 * ne + 1);
  alive_[a >> 1] = alive_[b >> 1] = 0;
  rot_[v].clear();
  for (int& t : tracked_)
    if (t == a || t == b) t = -1;
  return true;
}

PlaneGraph EmbeddingEditor::Compact(const std::vector<char>& keep, std::vector<int>* vmap,
                                    std::vector<int>* dmap, int outer_dart) const {
  const int n = static_cast<int>(rot_.size());
  std::vector<int> vm(n, -1);
  int nv = 0;
  for (int v = 0; v < n; ++v)
    if (!rot_[v].empty() || (v < static_cast<int>(keep.size()) && keep[v])) vm[v] = nv++;
  std::vector<int> dm(2 * edges_.size(), -1);
  std::vector<Edge> edges;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (!alive_[e]) continue;
    int ne = static_cast<int>(edges.size());
    edges.push_back({vm[edges_[e].u], vm[edges_[e].v], edges_[e].w});
    dm[2 * e] = 2 * ne;
    dm[2 * e + 1] = 2 * ne + 1;
  }
  std::vector<std::vector<int>> rot(nv);
  for (int v = 0; v < n; ++v) {
    if (vm[v] < 0) continue;
    for (int d : rot_[v]) rot[vm[v]].push_back(dm[d]);
  }
  int od = outer_dart >= 0 ? dm[outer_dart] : -1;
  if (vmap) *vmap = vm;
  if (dmap) *dmap = dm;
  return PlaneGraph::Build(nv, std::move(edges), std::move(rot), od, true);
}

}  // namespace emul
