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

#include "emul/division.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace emul {

double Separator::balance() const {
  return total > 0 ? std::max(inside, outside) / total : 0.0;
}

namespace {

std::vector<int> Bfs(const PlaneGraph& g, int s, std::vector<int>* pdart) {
  std::vector<int> depth(g.num_vertices(), -1);
  if (pdart) pdart->assign(g.num_vertices(), -1);
  std::deque<int> q{s};
  depth[s] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int d : g.rotation(v)) {
      int w = g.head(d);
      if (depth[w] >= 0) continue;
      depth[w] = depth[v] + 1;
      if (pdart) (*pdart)[w] = d;
      q.push_back(w);
    }
  }
  return depth;
}

// Faces of more than three darts get a virtual vertex inside, joined to
// every corner. Real vertices keep their ids.
PlaneGraph FanTriangulate(const PlaneGraph& g) {
  EmbeddingBuilder b;
  b.AddVertices(g.num_vertices());
  for (const Edge& e : g.edges()) b.AddEdge(e.u, e.v, e.w);
  std::vector<int> before(g.num_darts(), -1);  // dart inserted before d
  for (int f = 0; f < g.num_faces(); ++f) {
    const auto& walk = g.face_walk(f);
    if (walk.size() <= 3) continue;
    int x = b.AddVertex();
    std::vector<int> xr;
    for (int d : walk) {
      int nd = b.AddEdge(g.origin(d), x, 0);
      before[d] = nd;
      xr.push_back(nd ^ 1);
    }
    std::reverse(xr.begin(), xr.end());
    b.SetRotation(x, xr);
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::vector<int> rot;
    for (int d : g.rotation(v)) {
      if (before[d] >= 0) rot.push_back(before[d]);
      rot.push_back(d);
    }
    b.SetRotation(v, rot);
  }
  return b.Build(g.num_edges() > 0 ? 0 : -1);
}

struct Fenwick {
  std::vector<double> t;
  explicit Fenwick(int n) : t(n + 1, 0) {}
  void Add(int i, double w) {
    for (++i; i < static_cast<int>(t.size()); i += i & -i) t[i] += w;
  }
  double Prefix(int i) const {  // sum over [0, i)
    double s = 0;
    for (; i > 0; i -= i & -i) s += t[i];
    return s;
  }
};

}  // namespace

Separator BalancedSeparator(const PlaneGraph& g, const std::vector<double>& weight) {
  Separator sep;
  const int n = g.num_vertices();
  for (int v = 0; v < n; ++v) sep.total += weight[v];
  if (n == 0) return sep;
  if (g.num_edges() == 0) {
    sep.cycle = {static_cast<int>(std::max_element(weight.begin(), weight.end()) - weight.begin())};
    sep.on_cycle = weight[sep.cycle[0]];
    return sep;
  }
  const PlaneGraph t = FanTriangulate(g);
  const int nt = t.num_vertices();
  std::vector<double> w(nt, 0);
  std::copy(weight.begin(), weight.end(), w.begin());

  // Root near the centre of a longest BFS path.
  auto d0 = Bfs(t, 0, nullptr);
  int a = static_cast<int>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  std::vector<int> pd;
  auto da = Bfs(t, a, &pd);
  int b = static_cast<int>(std::max_element(da.begin(), da.end()) - da.begin());
  int root = b;
  for (int s = 0; s < da[b] / 2; ++s) root = t.origin(pd[root]);
  auto depth = Bfs(t, root, &pd);

  std::vector<char> tree_edge(t.num_edges(), 0);
  for (int v = 0; v < nt; ++v)
    if (pd[v] >= 0) tree_edge[PlaneGraph::edge_of(pd[v])] = 1;

  // Root-path sums and binary lifting for the cycle weights.
  std::vector<int> order(nt);
  for (int v = 0; v < nt; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return depth[x] < depth[y]; });
  int logn = 1;
  while ((1 << logn) < nt) ++logn;
  std::vector<std::vector<int>> up(logn, std::vector<int>(nt, root));
  std::vector<double> wsum(nt, 0);
  std::vector<int> csum(nt, 0);
  for (int v : order) {
    int par = pd[v] >= 0 ? t.origin(pd[v]) : v;
    up[0][v] = par;
    wsum[v] = w[v] + (v == root ? 0 : wsum[par]);
    csum[v] = (v < n) + (v == root ? 0 : csum[par]);
  }
  for (int j = 1; j < logn; ++j)
    for (int v = 0; v < nt; ++v) up[j][v] = up[j - 1][up[j - 1][v]];
  auto lca = [&](int x, int y) {
    if (depth[x] < depth[y]) std::swap(x, y);
    for (int j = logn - 1; j >= 0; --j)
      if (depth[x] - (1 << j) >= depth[y]) x = up[j][x];
    if (x == y) return x;
    for (int j = logn - 1; j >= 0; --j)
      if (up[j][x] != up[j][y]) {
        x = up[j][x];
        y = up[j][y];
      }
    return up[0][x];
  };

  // Dual tree over the non-tree edges, with Euler intervals.
  const int nf = t.num_faces();
  std::vector<std::vector<int>> dadj(nf);
  for (int e = 0; e < t.num_edges(); ++e) {
    if (tree_edge[e]) continue;
    dadj[t.face(2 * e)].push_back(e);
    dadj[t.face(2 * e + 1)].push_back(e);
  }
  std::vector<int> tin(nf, -1), tout(nf, -1), child_of_edge(t.num_edges(), -1);
  int clock = 0;
  {
    std::vector<std::pair<int, size_t>> st{{0, 0}};
    tin[0] = clock++;
    while (!st.empty()) {
      auto& [f, i] = st.back();
      if (i < dadj[f].size()) {
        int e = dadj[f][i++];
        int other = t.face(2 * e) == f ? t.face(2 * e + 1) : t.face(2 * e);
        if (tin[other] >= 0) continue;
        tin[other] = clock++;
        child_of_edge[e] = other;
        st.push_back({other, 0});
      } else {
        tout[f] = clock;
        st.pop_back();
      }
    }
  }

  // Vertex v is strictly inside the cycle of e iff all its faces lie in
  // the dual subtree below e.
  struct Pt {
    int lo, hi;
    double w;
  };
  std::vector<Pt> pts;
  for (int v = 0; v < n; ++v) {
    if (w[v] == 0) continue;
    int lo = nf, hi = -1;
    for (int d : t.rotation(v)) {
      lo = std::min(lo, tin[t.face(d)]);
      hi = std::max(hi, tin[t.face(d)]);
    }
    pts.push_back({lo, hi, w[v]});
  }
  std::sort(pts.begin(), pts.end(), [](const Pt& x, const Pt& y) { return x.lo > y.lo; });
  std::vector<int> cand;
  for (int e = 0; e < t.num_edges(); ++e)
    if (child_of_edge[e] >= 0) cand.push_back(e);
  std::sort(cand.begin(), cand.end(),
            [&](int x, int y) { return tin[child_of_edge[x]] > tin[child_of_edge[y]]; });
  Fenwick fw(nf + 1);
  size_t at = 0;
  int best = -1;
  bool best_ok = false;
  double best_max = kInf;
  int best_size = 0;
  for (int e : cand) {
    const int c = child_of_edge[e];
    while (at < pts.size() && pts[at].lo >= tin[c]) {
      fw.Add(pts[at].hi, pts[at].w);
      ++at;
    }
    const double inside = fw.Prefix(tout[c]);
    const int x = t.edge(e).u, y = t.edge(e).v, z = lca(x, y);
    const double on = wsum[x] + wsum[y] - 2 * wsum[z] + w[z];
    const int size = csum[x] + csum[y] - 2 * csum[z] + (z < n);
    const double outside = sep.total - inside - on;
    const double mx = std::max(inside, outside);
    const bool ok = mx <= 0.75 * sep.total * (1 + 1e-12);
    bool better;
    if (best < 0) {
      better = true;
    } else if (ok != best_ok) {
      better = ok;
    } else if (ok) {
      better = size < best_size || (size == best_size && mx < best_max);
    } else {
      better = mx < best_max || (mx == best_max && size < best_size);
    }
    if (better) {
      best = e;
      best_ok = ok;
      best_max = mx;
      best_size = size;
      sep.inside = inside;
      sep.outside = outside;
      sep.on_cycle = on;
    }
  }
  if (best < 0) {
    // A tree triangulates to nothing larger than a triangle: n <= 3.
    sep.cycle = {root < n ? root : 0};
    sep.on_cycle = w[sep.cycle[0]];
    sep.inside = 0;
    sep.outside = sep.total - sep.on_cycle;
    return sep;
  }
  int x = t.edge(best).u, y = t.edge(best).v, z = lca(x, y);
  std::vector<int> left, right;
  for (int v = x; v != z; v = up[0][v]) left.push_back(v);
  left.push_back(z);
  for (int v = y; v != z; v = up[0][v]) right.push_back(v);
  std::reverse(right.begin(), right.end());
  for (int v : left)
    if (v < n) sep.cycle.push_back(v);
  for (int v : right)
    if (v < n) sep.cycle.push_back(v);
  return sep;
}

namespace {

struct Divider {
  const Instance& in;
  int r;
  DivisionParams p;
  std::vector<int> gdeg;
  std::vector<char> is_term;
  std::vector<std::vector<int>> out;  // edge lists of finished pieces

  struct Stats {
    int boundary = 0;
    int holes = 0;
    int terms = 0;
    std::vector<std::vector<int>> hole_vertices;  // per hole, sub vertex ids
    std::vector<char> boundary_flag;              // per sub vertex
  };

  Stats Measure(const SubgraphResult& sub) const {
    const PlaneGraph& g = in.g;
    const PlaneGraph& s = sub.g;
    Stats st;
    st.boundary_flag.assign(s.num_vertices(), 0);
    std::map<int, std::set<int>> hole_faces;
    for (int v = 0; v < s.num_vertices(); ++v) {
      int ov = sub.vorig[v];
      st.terms += is_term[ov];
      if (s.degree(v) == gdeg[ov]) continue;
      st.boundary_flag[v] = 1;
      ++st.boundary;
      for (int d : s.rotation(v)) {
        if (g.rot_prev(sub.dorig[d]) != sub.dorig[s.rot_prev(d)]) hole_faces[s.face(d)].insert(v);
      }
    }
    st.holes = static_cast<int>(hole_faces.size());
    for (auto& [f, vs] : hole_faces) st.hole_vertices.emplace_back(vs.begin(), vs.end());
    return st;
  }

  bool Done(int nv, const Stats& st, int small_rounds) const {
    if (nv > r) return false;
    if (small_rounds >= p.extra_rounds) return true;
    const double kr = static_cast<double>(in.k()) * r / in.g.num_vertices();
    return st.boundary <= p.c_div * std::sqrt(static_cast<double>(r)) && st.holes <= p.h_max &&
           st.terms <= p.c_div * (1 + kr);
  }

  // Splits the edges of sub along sep; returns parent edge lists.
  std::vector<std::vector<int>> Cut(const SubgraphResult& sub, const std::vector<int>& cycle) {
    const PlaneGraph& s = sub.g;
    const int nv = s.num_vertices();
    std::vector<char> on(nv, 0);
    for (int v : cycle) on[v] = 1;
    std::vector<int> comp(nv, -1);
    int nc = 0;
    for (int v0 = 0; v0 < nv; ++v0) {
      if (on[v0] || comp[v0] >= 0) continue;
      std::deque<int> q{v0};
      comp[v0] = nc;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int d : s.rotation(v)) {
          int u = s.head(d);
          if (!on[u] && comp[u] < 0) {
            comp[u] = nc;
            q.push_back(u);
          }
        }
      }
      ++nc;
    }
    std::vector<std::set<int>> touch(nv);
    std::vector<int> group(s.num_edges(), -1);
    for (int e = 0; e < s.num_edges(); ++e) {
      int u = s.edge(e).u, v = s.edge(e).v;
      int c = !on[u] ? comp[u] : (!on[v] ? comp[v] : -1);
      if (c < 0) continue;
      group[e] = c;
      touch[u].insert(c);
      touch[v].insert(c);
    }
    // Edges between two separator vertices join a neighbouring group.
    int extra = nc;
    for (int e = 0; e < s.num_edges(); ++e) {
      if (group[e] >= 0) continue;
      int u = s.edge(e).u, v = s.edge(e).v;
      int c = -1;
      for (int x : touch[u])
        if (touch[v].count(x)) {
          c = x;
          break;
        }
      if (c < 0 && !touch[u].empty()) c = *touch[u].begin();
      if (c < 0 && !touch[v].empty()) c = *touch[v].begin();
      if (c < 0) c = extra++;
      group[e] = c;
      touch[u].insert(c);
      touch[v].insert(c);
    }
    std::vector<std::vector<int>> groups(extra);
    for (int e = 0; e < s.num_edges(); ++e) groups[group[e]].push_back(sub.dorig[2 * e] >> 1);
    // Separator-only groups can be disconnected; split them.
    std::vector<std::vector<int>> res;
    for (auto& grp : groups) {
      if (grp.empty()) continue;
      for (auto& part : Components(grp)) res.push_back(std::move(part));
    }
    return res;
  }

  std::vector<std::vector<int>> Components(const std::vector<int>& edges) const {
    std::map<int, int> uf;
    std::function<int(int)> find = [&](int x) {
      auto it = uf.find(x);
      if (it == uf.end()) {
        uf[x] = x;
        return x;
      }
      if (it->second == x) return x;
      int rt = find(it->second);
      uf[x] = rt;
      return rt;
    };
    for (int e : edges) {
      int a = find(in.g.edge(e).u), b = find(in.g.edge(e).v);
      if (a != b) uf[std::max(a, b)] = std::min(a, b);
    }
    std::map<int, std::vector<int>> by;
    for (int e : edges) by[find(in.g.edge(e).u)].push_back(e);
    std::vector<std::vector<int>> res;
    for (auto& [root, es] : by) res.push_back(es);
    return res;
  }

  void Recurse(std::vector<int> edges, int level, int small_rounds) {
    std::sort(edges.begin(), edges.end());
    std::vector<char> keep(in.g.num_edges(), 0);
    for (int e : edges) keep[e] = 1;
    SubgraphResult sub = EdgeSubgraph(in.g, keep);
    const int nv = sub.g.num_vertices();
    Stats st = Measure(sub);
    if (nv <= r) ++small_rounds;
    if (nv <= 2 || Done(nv, st, small_rounds - 1)) {
      out.push_back(std::move(edges));
      return;
    }
    int mode = st.holes > p.h_max ? 2 : level % 4;
    for (int attempt = 0; attempt < 2; ++attempt) {
      std::vector<double> w(nv, 0);
      if (mode == 1) {
        for (int v = 0; v < nv; ++v) w[v] = st.boundary_flag[v];
      } else if (mode == 2) {
        for (auto& hv : st.hole_vertices)
          for (int v : hv) w[v] += 1.0 / hv.size();
      } else if (mode == 3) {
        for (int v = 0; v < nv; ++v) w[v] = is_term[sub.vorig[v]];
      }
      double tot = 0;
      for (double x : w) tot += x;
      if (tot == 0) {
        std::fill(w.begin(), w.end(), 1.0);
        mode = 0;
      }
      Separator sep = BalancedSeparator(sub.g, w);
      auto parts = Cut(sub, sep.cycle);
      if (parts.size() > 1) {
        for (auto& part : parts) Recurse(std::move(part), level + 1, small_rounds);
        return;
      }
      if (mode == 0) break;
      mode = 0;
    }
    out.push_back(std::move(edges));
  }
};

}  // namespace

RDivision RDivide(const Instance& in, int r, const DivisionParams& p) {
  if (r < 16) throw Error(ErrorKind::kRTooSmall, "r = " + std::to_string(r));
  const PlaneGraph& g = in.g;
  Divider dv{in, r, p, {}, {}, {}};
  dv.gdeg.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) dv.gdeg[v] = g.degree(v);
  dv.is_term.assign(g.num_vertices(), 0);
  for (int t : in.terms) dv.is_term[t] = 1;
  std::vector<int> all(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) all[e] = e;
  if (g.num_vertices() <= r) {
    dv.out.push_back(all);
  } else {
    dv.Recurse(all, 0, 0);
  }

  RDivision div;
  div.r = r;
  div.n = g.num_vertices();
  div.k = in.k();
  div.piece_of_edge.assign(g.num_edges(), -1);
  std::sort(dv.out.begin(), dv.out.end());
  std::vector<std::vector<int>> pieces_at(g.num_vertices());
  for (int pi = 0; pi < static_cast<int>(dv.out.size()); ++pi) {
    RPiece piece;
    piece.edges = dv.out[pi];
    for (int e : piece.edges) {
      div.piece_of_edge[e] = pi;
      piece.vertices.push_back(g.edge(e).u);
      piece.vertices.push_back(g.edge(e).v);
    }
    std::sort(piece.vertices.begin(), piece.vertices.end());
    piece.vertices.erase(std::unique(piece.vertices.begin(), piece.vertices.end()),
                         piece.vertices.end());
    div.pieces.push_back(std::move(piece));
  }
  std::vector<std::vector<int>> terms_at(g.num_vertices());
  for (int i = 0; i < in.k(); ++i) terms_at[in.terms[i]].push_back(i);
  for (auto& piece : div.pieces) {
    std::vector<char> keep(g.num_edges(), 0);
    for (int e : piece.edges) keep[e] = 1;
    SubgraphResult sub = EdgeSubgraph(g, keep);
    auto st = dv.Measure(sub);
    piece.holes = st.holes;
    for (int v = 0; v < sub.g.num_vertices(); ++v)
      if (st.boundary_flag[v]) piece.boundary.push_back(sub.vorig[v]);
    std::sort(piece.boundary.begin(), piece.boundary.end());
    for (int v : piece.vertices)
      for (int t : terms_at[v]) piece.terminals.push_back(t);
    std::sort(piece.terminals.begin(), piece.terminals.end());
  }
  return div;
}

nlohmann::json RDivision::ToJson() const {
  nlohmann::json j;
  j["r"] = r;
  j["n"] = n;
  j["k"] = k;
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces) {
    j["pieces"].push_back({{"edges", p.edges},
                           {"boundary", p.boundary},
                           {"terminals", p.terminals},
                           {"vertices", p.vertices.size()},
                           {"holes", p.holes}});
  }
  return j;
}

SplitResult DivisionSplit(const Instance& in, const RDivision& div) {
  const PlaneGraph& g = in.g;
  SliceSpec spec;
  spec.fedge.assign(g.num_edges(), 0);
  spec.identified.assign(g.num_vertices(), 0);
  spec.cut_corner.assign(g.num_darts(), 0);
  for (const auto& piece : div.pieces)
    for (int v : piece.boundary) spec.identified[v] = 1;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!spec.identified[v]) continue;
    for (int d : g.rotation(v)) {
      if (div.piece_of_edge[d >> 1] != div.piece_of_edge[g.rot(d) >> 1]) spec.cut_corner[d] = 1;
    }
  }
  return SplitInstance(in, spec);
}

}  // namespace emul
