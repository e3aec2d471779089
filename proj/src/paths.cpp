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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "emul/onehole.hpp"

namespace emul {

std::vector<int> BranchVertices(const PlaneGraph& g, const std::vector<Path>& paths) {
  std::vector<char> in_union(g.num_edges(), 0);
  for (const Path& p : paths)
    for (int d : p.darts) in_union[PlaneGraph::edge_of(d)] = 1;
  std::vector<int> deg(g.num_vertices(), 0), out;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (!in_union[e]) continue;
    deg[g.edge(e).u]++;
    deg[g.edge(e).v]++;
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (deg[v] >= 3) out.push_back(v);
  return out;
}

namespace {

bool Fails(double via, double direct, double eps) {
  return via > (1 + eps) * direct * (1 + 1e-12) + 1e-300;
}

}  // namespace

void ExtendCover(const std::vector<double>& prefix, const std::vector<double>& dv, double eps,
                 std::vector<char>* chosen) {
  std::vector<char>& ch = *chosen;
  const int m = static_cast<int>(dv.size());
  if (m == 0) return;
  int c = 0;
  for (int i = 1; i < m; ++i)
    if (dv[i] < dv[c]) c = i;
  // Best detour from chosen vertices right of x: min dv[y] + prefix[y].
  std::vector<double> rmin(m + 1, kInf);
  for (int x = m - 1; x >= 0; --x)
    rmin[x] = std::min(rmin[x + 1], ch[x] ? dv[x] + prefix[x] : kInf);
  double left = kInf;  // min dv[y] - prefix[y] over chosen y <= x
  for (int x = 0; x < c; ++x)
    if (ch[x]) left = std::min(left, dv[x] - prefix[x]);
  for (int x = c; x < m; ++x) {
    if (ch[x]) left = std::min(left, dv[x] - prefix[x]);
    double via = std::min(left + prefix[x], rmin[x] - prefix[x]);
    if (Fails(via, dv[x], eps)) {
      ch[x] = 1;
      left = std::min(left, dv[x] - prefix[x]);
    }
  }
  std::vector<double> lmin(m, kInf);
  for (int x = 0; x < m; ++x)
    lmin[x] = std::min(x ? lmin[x - 1] : kInf, ch[x] ? dv[x] - prefix[x] : kInf);
  double right = kInf;
  for (int x = m - 1; x >= c; --x)
    if (ch[x]) right = std::min(right, dv[x] + prefix[x]);
  for (int x = c - 1; x >= 0; --x) {
    if (ch[x]) right = std::min(right, dv[x] + prefix[x]);
    double via = std::min(lmin[x] + prefix[x], right - prefix[x]);
    if (Fails(via, dv[x], eps)) {
      ch[x] = 1;
      right = std::min(right, dv[x] + prefix[x]);
    }
  }
}

std::vector<int> EpsCoverFromDistances(const std::vector<int>& pverts,
                                       const std::vector<double>& prefix,
                                       const std::vector<double>& dv, double eps) {
  std::vector<char> chosen(pverts.size(), 0);
  ExtendCover(prefix, dv, eps, &chosen);
  std::vector<int> out;
  for (size_t i = 0; i < pverts.size(); ++i)
    if (chosen[i]) out.push_back(pverts[i]);
  return out;
}

namespace {

std::vector<double> PrefixWeights(const PlaneGraph& g, const Path& p) {
  std::vector<double> pre{0};
  for (int d : p.darts) pre.push_back(pre.back() + g.weight(d));
  return pre;
}

}  // namespace

std::vector<int> EpsCover(const PlaneGraph& g, const Path& p, int v, double eps) {
  auto pv = p.Vertices(g);
  if (std::find(pv.begin(), pv.end(), v) != pv.end()) return {v};
  ShortestPathTree t(g, v);
  std::vector<double> dv;
  for (int x : pv) dv.push_back(t.dist(x));
  return EpsCoverFromDistances(pv, PrefixWeights(g, p), dv, eps);
}

std::vector<int> ExponentialPortals(const PlaneGraph& g, const Path& p, double eps_r, int marks,
                                   double unit) {
  const auto pv = p.Vertices(g);
  if (pv.empty()) return {};
  const auto pre = PrefixWeights(g, p);
  const double len = pre.back();
  std::vector<char> chosen(pv.size(), 0);
  chosen.front() = chosen.back() = 1;
  auto mark = [&](double at) {
    // Nearest path vertices on both sides of position at.
    auto it = std::lower_bound(pre.begin(), pre.end(), at - 1e-12 * std::max(1.0, len));
    size_t hi = std::min(pre.size() - 1, static_cast<size_t>(it - pre.begin()));
    chosen[hi] = 1;
    if (pre[hi] > at + 1e-12 * std::max(1.0, len) && hi > 0) chosen[hi - 1] = 1;
  };
  for (int i = 1; i <= marks; ++i) {
    const double x = unit * std::exp(i * eps_r);
    if (x > len * (1 + 1e-12)) break;
    mark(x);
    mark(len - x);
  }
  std::vector<int> out;
  for (size_t i = 0; i < pv.size(); ++i)
    if (chosen[i]) out.push_back(pv[i]);
  return out;
}

std::vector<int> EpsCoverUnion(const PlaneGraph& g, const Path& p, const std::vector<int>& ys,
                               double eps) {
  auto pv = p.Vertices(g);
  auto prefix = PrefixWeights(g, p);
  std::vector<char> chosen(pv.size(), 0);
  for (int y : ys) {
    ShortestPathTree t(g, y);
    std::vector<double> dv;
    for (int x : pv) dv.push_back(t.dist(x));
    ExtendCover(prefix, dv, eps, &chosen);
  }
  std::vector<int> out;
  for (size_t i = 0; i < pv.size(); ++i)
    if (chosen[i]) out.push_back(pv[i]);
  return out;
}

bool CoverValid(const PlaneGraph& g, const Path& p, int v, const std::vector<int>& cover,
                double eps, double slack) {
  auto pv = p.Vertices(g);
  ShortestPathTree tv(g, v);
  std::vector<std::vector<double>> from_y;
  for (int y : cover) from_y.push_back(ShortestPathTree(g, y).dists());
  for (int x : pv) {
    bool ok = false;
    for (size_t j = 0; j < cover.size() && !ok; ++j) {
      double lhs = tv.dist(cover[j]) + from_y[j][x];
      ok = lhs <= (1 + eps) * tv.dist(x) * (1 + slack);
    }
    if (!ok) return false;
  }
  return true;
}

namespace {

struct Region {
  Instance inst;
  std::vector<int> vkey;   // region vertex -> original vertex
  std::vector<int> ekey;   // region edge -> original edge
  std::vector<int> dorig;  // region dart -> original dart
  std::map<int, int> tloc;  // original terminal index -> region terminal index
};

bool Crosses(std::pair<int, int> a, std::pair<int, int> b) {
  auto [p, q] = a;
  auto [r, s] = b;
  bool r_in = p < r && r < q;
  bool s_in = p < s && s < q;
  bool r_out = r < p || r > q;
  bool s_out = s < p || s > q;
  return (r_in && s_out) || (s_in && r_out);
}

Path SolveDirect(const Region& reg, int a, int b) {
  SearchOptions opt;
  opt.vertex_key = &reg.vkey;
  opt.edge_key = &reg.ekey;
  const Instance& in = reg.inst;
  Path p = ShortestPath(in.g, in.terms[reg.tloc.at(a)], in.terms[reg.tloc.at(b)], opt);
  Path out;
  out.s = reg.vkey[p.s];
  out.t = reg.vkey[p.t];
  out.weight = p.weight;
  for (int d : p.darts) out.darts.push_back(reg.dorig[d]);
  return out;
}

void Solve(const Region& reg, const std::vector<std::pair<int, int>>& pairs,
           const std::vector<int>& ids, std::vector<Path>* out) {
  if (ids.size() <= 2) {
    for (int id : ids) (*out)[id] = SolveDirect(reg, pairs[id].first, pairs[id].second);
    return;
  }
  // Candidate chords between pair endpoints; keep the one with the most
  // even split that crosses no pair.
  std::set<int> ends;
  for (int id : ids) {
    ends.insert(pairs[id].first);
    ends.insert(pairs[id].second);
  }
  std::vector<int> ev(ends.begin(), ends.end());
  int best_a = -1, best_b = -1;
  size_t best = ids.size();
  for (size_t i = 0; i < ev.size(); ++i) {
    for (size_t j = i + 1; j < ev.size(); ++j) {
      std::pair<int, int> ch{ev[i], ev[j]};
      size_t inside = 0, outside = 0;
      bool bad = false;
      for (int id : ids) {
        if (pairs[id] == ch) continue;
        if (Crosses(ch, pairs[id])) {
          bad = true;
          break;
        }
        auto [x, y] = pairs[id];
        bool in = x >= ch.first && y <= ch.second;
        (in ? inside : outside)++;
      }
      if (bad) continue;
      size_t worst = std::max(inside, outside);
      if (worst < best) {
        best = worst;
        best_a = ch.first;
        best_b = ch.second;
      }
    }
  }
  if (best_a < 0 || best >= ids.size()) {
    for (int id : ids) (*out)[id] = SolveDirect(reg, pairs[id].first, pairs[id].second);
    return;
  }
  const Instance& in = reg.inst;
  const PlaneGraph& g = in.g;
  SearchOptions opt;
  opt.vertex_key = &reg.vkey;
  opt.edge_key = &reg.ekey;
  int ra = reg.tloc.at(best_a), rb = reg.tloc.at(best_b);
  Path p = ShortestPath(g, in.terms[ra], in.terms[rb], opt);
  std::vector<int> side_in, side_out;
  for (int id : ids) {
    if (pairs[id] == std::make_pair(best_a, best_b)) {
      Path q;
      q.s = reg.vkey[p.s];
      q.t = reg.vkey[p.t];
      q.weight = p.weight;
      for (int d : p.darts) q.darts.push_back(reg.dorig[d]);
      (*out)[id] = q;
      continue;
    }
    auto [x, y] = pairs[id];
    (x >= best_a && y <= best_b ? side_in : side_out).push_back(id);
  }
  SliceSpec spec;
  spec.fedge.assign(g.num_edges(), 0);
  spec.identified.assign(g.num_vertices(), 0);
  spec.cut_corner.assign(g.num_darts(), 0);
  for (int d : p.darts) spec.fedge[PlaneGraph::edge_of(d)] = 1;
  spec.identified[p.s] = spec.identified[p.t] = 1;
  std::vector<char> on_p(g.num_vertices(), 0);
  for (int v : p.Vertices(g)) on_p[v] = 1;
  for (int t : in.terms)
    if (on_p[t]) spec.identified[t] = 1;
  const int of = g.outer_face();
  for (int d = 0; d < g.num_darts(); ++d) {
    if (spec.identified[g.origin(d)] && g.face(g.rot(d)) == of) spec.cut_corner[d] = 1;
  }
  SplitResult sr = SplitInstance(in, spec);
  // Region terminal index -> original terminal index.
  std::map<int, int> orig_of;
  for (auto [o, r] : reg.tloc) orig_of[r] = o;
  for (const auto* side : {&side_in, &side_out}) {
    if (side->empty()) continue;
    // The piece holding a terminal strictly inside this side.
    int piece = -1;
    for (int id : *side) {
      for (int t : {pairs[id].first, pairs[id].second}) {
        if (t == best_a || t == best_b) continue;
        const auto& src = sr.plan.term_src[reg.tloc.at(t)];
        piece = src.first;
        break;
      }
      if (piece >= 0) break;
    }
    if (piece < 0) {
      for (int id : *side) (*out)[id] = SolveDirect(reg, pairs[id].first, pairs[id].second);
      continue;
    }
    Region sub;
    sub.inst = sr.pieces[piece];
    const auto& vo = sr.vorig[piece];
    const auto& dor = sr.dorig[piece];
    sub.vkey.resize(vo.size());
    for (size_t v = 0; v < vo.size(); ++v) sub.vkey[v] = reg.vkey[vo[v]];
    sub.ekey.resize(dor.size() / 2);
    sub.dorig.resize(dor.size());
    for (size_t d = 0; d < dor.size(); ++d) {
      sub.dorig[d] = reg.dorig[dor[d]];
      if (d % 2 == 0) sub.ekey[d / 2] = reg.ekey[PlaneGraph::edge_of(dor[d])];
    }
    std::set<int> needed;
    for (int id : *side) {
      needed.insert(pairs[id].first);
      needed.insert(pairs[id].second);
    }
    bool whole = true;
    for (int t : needed) {
      int rv = in.terms[reg.tloc.at(t)];
      int found = -1;
      for (int i = 0; i < sub.inst.k(); ++i) {
        if (sr.term_vertex[piece][i] != rv) continue;
        if (found < 0 || sr.term_parent[piece][i] == reg.tloc.at(t)) found = i;
      }
      if (found < 0) whole = false;
      sub.tloc[t] = found;
    }
    // A chord running along the outer face leaves this side without an
    // area of its own; the global tie-break keeps direct paths consistent.
    if (!whole) {
      for (int id : *side) (*out)[id] = SolveDirect(reg, pairs[id].first, pairs[id].second);
      continue;
    }
    Solve(sub, pairs, *side, out);
  }
}

}  // namespace

PathSet NoncrossingShortestPaths(const Instance& in,
                                 const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::pair<int, int>> norm;
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= in.k() || b >= in.k()) {
      throw Error(ErrorKind::kCrossingPairs, "pair index out of range");
    }
    norm.emplace_back(std::min(a, b), std::max(a, b));
  }
  for (size_t i = 0; i < norm.size(); ++i) {
    for (size_t j = i + 1; j < norm.size(); ++j) {
      if (Crosses(norm[i], norm[j])) {
        throw Error(ErrorKind::kCrossingPairs,
                    "pairs " + std::to_string(i) + " and " + std::to_string(j) + " cross");
      }
    }
  }
  PathSet ps;
  ps.pairs = pairs;
  ps.paths.resize(norm.size());
  Region reg;
  reg.inst = in;
  reg.vkey.resize(in.g.num_vertices());
  for (int v = 0; v < in.g.num_vertices(); ++v) reg.vkey[v] = v;
  reg.ekey.resize(in.g.num_edges());
  for (int e = 0; e < in.g.num_edges(); ++e) reg.ekey[e] = e;
  reg.dorig.resize(in.g.num_darts());
  for (int d = 0; d < in.g.num_darts(); ++d) reg.dorig[d] = d;
  for (int i = 0; i < in.k(); ++i) reg.tloc[i] = i;
  std::vector<int> ids(norm.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  // Degenerate pairs (a, a) are empty paths.
  std::vector<int> real;
  for (int id : ids) {
    if (norm[id].first == norm[id].second) {
      Path p;
      p.s = p.t = in.terms[norm[id].first];
      ps.paths[id] = p;
    } else {
      real.push_back(id);
    }
  }
  Solve(reg, norm, real, &ps.paths);
  // Orient each path as requested.
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first > pairs[i].second && !ps.paths[i].darts.empty()) {
      Path& p = ps.paths[i];
      std::reverse(p.darts.begin(), p.darts.end());
      for (int& d : p.darts) d ^= 1;
      std::swap(p.s, p.t);
    }
  }
  std::set<int> ys;
  for (const Path& p : ps.paths) {
    ys.insert(p.s);
    ys.insert(p.t);
  }
  ps.branch = BranchVertices(in.g, ps.paths);
  for (int b : ps.branch) ys.insert(b);
  ps.portals.assign(ys.begin(), ys.end());
  return ps;
}

}  // namespace emul
