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
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "emul/onehole.hpp"

namespace emul {

SplitResult SplitInstance(const Instance& in, SliceSpec spec) {
  const PlaneGraph& g = in.g;
  for (int i = 0; i < in.k(); ++i) {
    if (spec.identified[in.terms[i]] && in.tdart[i] >= 0) {
      spec.cut_corner[g.rot_prev(in.tdart[i])] = 1;
    }
  }
  SliceResult s = Slice(g, spec);
  const int nv = s.g.num_vertices();

  // Terminals of the sliced graph: (new vertex, new tdart, parent terminal).
  struct STerm {
    int v, dart, parent;
  };
  std::vector<STerm> sterms;
  std::vector<int> term_of_run(nv, -1);
  std::vector<char> is_term_vertex(g.num_vertices(), 0);
  for (int t : in.terms) is_term_vertex[t] = 1;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!spec.identified[v]) continue;
    for (int run : s.runs[v]) {
      term_of_run[run] = static_cast<int>(sterms.size());
      sterms.push_back({run, s.first_dart[run], -1});
    }
  }
  std::vector<int> parent_run(in.k(), -1);
  for (int i = 0; i < in.k(); ++i) {
    int v = in.terms[i];
    int run = in.tdart[i] >= 0 ? s.corner_owner[in.tdart[i]] : s.runs[v][0];
    parent_run[i] = run;
    if (spec.identified[v]) {
      sterms[term_of_run[run]].parent = i;
    } else {
      term_of_run[run] = static_cast<int>(sterms.size());
      sterms.push_back({run, in.tdart[i] >= 0 ? s.corner_dart[in.tdart[i]] : -1, i});
    }
  }

  std::vector<std::vector<int>> comp_terms(s.num_comps);
  for (int i = 0; i < static_cast<int>(sterms.size()); ++i) {
    comp_terms[s.comp[sterms[i].v]].push_back(i);
  }
  SplitResult res;
  std::vector<int> piece_of_comp(s.num_comps, -1);
  std::vector<std::pair<int, int>> sterm_loc(sterms.size(), {-1, -1});
  for (int c = 0; c < s.num_comps; ++c) {
    if (comp_terms[c].size() < 2) continue;
    int p = static_cast<int>(res.pieces.size());
    piece_of_comp[c] = p;
    std::vector<char> keep_e(s.g.num_edges(), 0), keep_v(nv, 0);
    for (int e = 0; e < s.g.num_edges(); ++e) keep_e[e] = s.comp[s.g.edge(e).u] == c;
    for (int v = 0; v < nv; ++v) keep_v[v] = s.comp[v] == c;
    SubgraphResult sub = EdgeSubgraph(s.g, keep_e, &keep_v);
    // Group terminals into holes by face; order holes by the smallest
    // parent hole among their members, then by face id.
    std::map<int, int> face_rank;
    std::vector<std::tuple<int, int, int, int>> rows;  // hole key, pos, sterm, dart
    std::map<int, int> face_min_hole;
    for (int si : comp_terms[c]) {
      int d = sterms[si].dart >= 0 ? sub.dmap[sterms[si].dart] : -1;
      int f = d >= 0 ? sub.g.face(d) : -1;
      int ph = sterms[si].parent >= 0 ? in.hole[sterms[si].parent] : -1;
      int key = ph >= 0 ? ph : 1 << 29;
      auto it = face_min_hole.find(f);
      if (it == face_min_hole.end()) {
        face_min_hole[f] = key;
      } else {
        it->second = std::min(it->second, key);
      }
    }
    std::vector<std::pair<int, int>> order;
    for (auto& [f, key] : face_min_hole) order.emplace_back(key, f);
    std::sort(order.begin(), order.end());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) face_rank[order[i].second] = i;
    for (int si : comp_terms[c]) {
      int d = sterms[si].dart >= 0 ? sub.dmap[sterms[si].dart] : -1;
      int f = d >= 0 ? sub.g.face(d) : -1;
      rows.emplace_back(face_rank[f], d >= 0 ? WalkPosition(sub.g, d) : 0, si, d);
    }
    std::sort(rows.begin(), rows.end());
    int outer = -1;
    for (auto& row : rows) {
      if (std::get<3>(row) >= 0) {
        outer = std::get<3>(row);
        break;
      }
    }
    Instance piece;
    piece.g = outer >= 0 ? sub.g.WithOuterDart(outer) : sub.g;
    // Walk positions may shift after redesignating the outer face.
    if (outer >= 0) {
      for (auto& row : rows) {
        int d = std::get<3>(row);
        std::get<1>(row) = d >= 0 ? WalkPosition(piece.g, d) : 0;
      }
      std::sort(rows.begin(), rows.end());
    }
    std::vector<int> vorig(piece.g.num_vertices()), dorig(piece.g.num_darts());
    for (int v = 0; v < piece.g.num_vertices(); ++v) vorig[v] = s.vorig[sub.vorig[v]];
    for (int d = 0; d < piece.g.num_darts(); ++d) dorig[d] = s.dorig[sub.dorig[d]];
    std::vector<int> tparent, tvertex;
    for (auto& [hk, pos, si, d] : rows) {
      sterm_loc[si] = {p, piece.k()};
      piece.terms.push_back(sub.vmap[sterms[si].v]);
      piece.tdart.push_back(d);
      piece.hole.push_back(hk);
      tparent.push_back(sterms[si].parent);
      tvertex.push_back(s.vorig[sterms[si].v]);
    }
    res.pieces.push_back(std::move(piece));
    res.vorig.push_back(std::move(vorig));
    res.dorig.push_back(std::move(dorig));
    res.term_parent.push_back(std::move(tparent));
    res.term_vertex.push_back(std::move(tvertex));
  }

  SplitPlan& plan = res.plan;
  plan.num_pieces = static_cast<int>(res.pieces.size());
  plan.parent_hole = in.hole;
  for (auto& pc : res.pieces) plan.piece_k.push_back(pc.k());
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!spec.identified[v]) continue;
    SplitPlan::Group grp;
    grp.vertex = v;
    for (int run : s.runs[v]) grp.runs.push_back(sterm_loc[term_of_run[run]]);
    plan.groups.push_back(std::move(grp));
  }
  plan.term_src.resize(in.k());
  for (int i = 0; i < in.k(); ++i) {
    int v = in.terms[i];
    int run = parent_run[i];
    auto loc = sterm_loc[term_of_run[run]];
    if (loc.first < 0 && spec.identified[v]) {
      // Own run was dropped: take the next kept run counter-clockwise.
      const auto& runs = s.runs[v];
      int at = static_cast<int>(std::find(runs.begin(), runs.end(), run) - runs.begin());
      for (int step = 1; step < static_cast<int>(runs.size()) && loc.first < 0; ++step) {
        loc = sterm_loc[term_of_run[runs[(at + step) % runs.size()]]];
      }
    }
    if (loc.first < 0 && in.k() >= 2) {
      throw Error(ErrorKind::kInvalidPortalSet,
                  "terminal " + std::to_string(i) + " isolated from all other terminals");
    }
    plan.term_src[i] = loc;
  }
  return res;
}

SplitResult Split(const Instance& in, const PathSet& ps) {
  const PlaneGraph& g = in.g;
  SliceSpec spec;
  spec.fedge.assign(g.num_edges(), 0);
  spec.identified.assign(g.num_vertices(), 0);
  spec.cut_corner.assign(g.num_darts(), 0);
  std::vector<char> on_path(g.num_vertices(), 0);
  for (const Path& p : ps.paths) {
    for (int d : p.darts) spec.fedge[PlaneGraph::edge_of(d)] = 1;
    for (int v : p.Vertices(g)) on_path[v] = 1;
  }
  for (int y : ps.portals) {
    if (!on_path[y]) throw Error(ErrorKind::kInvalidPortalSet, "portal off the path set");
    spec.identified[y] = 1;
  }
  for (const Path& p : ps.paths) {
    if (!spec.identified[p.s] || !spec.identified[p.t]) {
      throw Error(ErrorKind::kInvalidPortalSet, "path endpoint missing from Y");
    }
  }
  for (int b : BranchVertices(g, ps.paths)) {
    if (!spec.identified[b]) throw Error(ErrorKind::kInvalidPortalSet, "branch vertex missing");
  }
  for (int t : in.terms)
    if (on_path[t]) spec.identified[t] = 1;
  const int of = g.outer_face();
  for (int d = 0; d < g.num_darts(); ++d) {
    if (spec.identified[g.origin(d)] && g.face(g.rot(d)) == of) spec.cut_corner[d] = 1;
  }
  SplitResult res = SplitInstance(in, std::move(spec));
  for (const Instance& pc : res.pieces) {
    for (int h : pc.hole) {
      if (h != 0) throw Error(ErrorKind::kInvalidPortalSet, "piece terminals on two faces");
    }
  }
  return res;
}

Instance Glue(const SplitPlan& plan, const std::vector<Instance>& children) {
  if (static_cast<int>(children.size()) != plan.num_pieces) {
    throw Error(ErrorKind::kInconsistentCopyLabels, "piece count mismatch");
  }
  std::vector<int> voff(children.size() + 1, 0), eoff(children.size() + 1, 0);
  for (size_t p = 0; p < children.size(); ++p) {
    if (children[p].k() != plan.piece_k[p]) {
      throw Error(ErrorKind::kInconsistentCopyLabels,
                  "piece " + std::to_string(p) + " terminal count mismatch");
    }
    voff[p + 1] = voff[p] + children[p].g.num_vertices();
    eoff[p + 1] = eoff[p] + children[p].g.num_edges();
  }
  const int total = voff.back();
  std::vector<int> group_of(total, -1);
  for (int gi = 0; gi < static_cast<int>(plan.groups.size()); ++gi) {
    for (auto [p, ti] : plan.groups[gi].runs) {
      if (p < 0) continue;
      if (p >= plan.num_pieces || ti < 0 || ti >= children[p].k()) {
        throw Error(ErrorKind::kInconsistentCopyLabels, "copy label out of range");
      }
      int gv = voff[p] + children[p].terms[ti];
      if (group_of[gv] != -1) {
        throw Error(ErrorKind::kInconsistentCopyLabels, "emulator vertex carries two copies");
      }
      group_of[gv] = gi;
    }
  }
  std::vector<int> group_id(plan.groups.size(), -1), newid(total, -1);
  int nv = 0;
  for (int gv = 0; gv < total; ++gv) {
    int gi = group_of[gv];
    if (gi >= 0) {
      if (group_id[gi] < 0) group_id[gi] = nv++;
      newid[gv] = group_id[gi];
    } else {
      newid[gv] = nv++;
    }
  }
  auto map_dart = [&](int p, int d) { return 2 * eoff[p] + d; };
  std::vector<Edge> edges;
  edges.reserve(eoff.back());
  for (size_t p = 0; p < children.size(); ++p) {
    for (const Edge& e : children[p].g.edges()) {
      edges.push_back({newid[voff[p] + e.u], newid[voff[p] + e.v], e.w});
    }
  }
  std::vector<std::vector<int>> rot(nv);
  for (size_t p = 0; p < children.size(); ++p) {
    const PlaneGraph& cg = children[p].g;
    for (int v = 0; v < cg.num_vertices(); ++v) {
      if (group_of[voff[p] + v] >= 0) continue;
      for (int d : cg.rotation(v)) rot[newid[voff[p] + v]].push_back(map_dart(p, d));
    }
  }
  for (int gi = 0; gi < static_cast<int>(plan.groups.size()); ++gi) {
    if (group_id[gi] < 0) continue;
    auto& r = rot[group_id[gi]];
    for (auto [p, ti] : plan.groups[gi].runs) {
      if (p < 0) continue;
      const PlaneGraph& cg = children[p].g;
      int v = children[p].terms[ti];
      int start = children[p].tdart[ti];
      const auto& cr = cg.rotation(v);
      if (cr.empty()) continue;
      int at = start >= 0 ? cg.rotation_index(start) : 0;
      for (size_t j = 0; j < cr.size(); ++j) r.push_back(map_dart(p, cr[(at + j) % cr.size()]));
    }
  }
  Instance out;
  out.hole = plan.parent_hole;
  for (auto [p, ti] : plan.term_src) {
    if (p < 0) {
      throw Error(ErrorKind::kInconsistentCopyLabels, "terminal without a source piece");
    }
    out.terms.push_back(newid[voff[p] + children[p].terms[ti]]);
    int d = children[p].tdart[ti];
    out.tdart.push_back(d >= 0 ? map_dart(p, d) : -1);
  }
  int outer = -1;
  for (int i = 0; i < static_cast<int>(out.tdart.size()) && outer < 0; ++i) {
    if (out.hole[i] <= 0) outer = out.tdart[i];
  }
  if (outer < 0 && !edges.empty()) outer = 0;
  out.g = PlaneGraph::Build(nv, std::move(edges), std::move(rot), outer);
  return out;
}

Instance Combine(const CombineNode& node, const std::vector<Instance>& leaves) {
  switch (node.kind) {
    case CombineNode::Kind::kLeaf:
      return leaves.at(node.leaf);
    case CombineNode::Kind::kPull:
      return Combine(node.children.at(0), leaves);
    case CombineNode::Kind::kSplit: {
      std::vector<Instance> kids;
      kids.reserve(node.children.size());
      for (const auto& c : node.children) kids.push_back(Combine(c, leaves));
      return Glue(node.plan, kids);
    }
  }
  return {};
}

Instance PullTerminals(const Instance& in, const std::vector<char>& pull, double w) {
  const PlaneGraph& g = in.g;
  EmbeddingBuilder b;
  b.AddVertices(g.num_vertices());
  for (const Edge& e : g.edges()) b.AddEdge(e.u, e.v, e.w);
  for (int v = 0; v < g.num_vertices(); ++v) b.SetRotation(v, g.rotation(v));
  Instance out;
  out.hole = in.hole;
  for (int i = 0; i < in.k(); ++i) {
    if (!pull[i]) {
      out.terms.push_back(in.terms[i]);
      out.tdart.push_back(in.tdart[i]);
      continue;
    }
    int u = in.terms[i];
    int x = b.AddVertex();
    int d = b.AddEdge(u, x, w);
    auto& r = b.rotation(u);
    auto it = in.tdart[i] >= 0 ? std::find(r.begin(), r.end(), in.tdart[i]) : r.end();
    r.insert(it, d);
    b.SetRotation(x, {d ^ 1});
    out.terms.push_back(x);
    out.tdart.push_back(d ^ 1);
  }
  int outer = g.outer_dart();
  if (outer < 0 && !out.tdart.empty()) outer = out.tdart[0];
  out.g = b.Build(outer);
  return out;
}

SplitResult RemoveCutVertices(const Instance& in) {
  const PlaneGraph& g = in.g;
  SliceSpec spec;
  spec.fedge.assign(g.num_edges(), 0);
  spec.identified.assign(g.num_vertices(), 0);
  spec.cut_corner.assign(g.num_darts(), 0);
  std::vector<char> is_term(g.num_vertices(), 0);
  for (int t : in.terms) is_term[t] = 1;
  for (int v : OuterRepeatedVertices(g))
    if (is_term[v]) spec.identified[v] = 1;
  const int of = g.outer_face();
  for (int d = 0; d < g.num_darts(); ++d) {
    if (spec.identified[g.origin(d)] && g.face(g.rot(d)) == of) spec.cut_corner[d] = 1;
  }
  return SplitInstance(in, std::move(spec));
}

Instance BaseZeroEmulator(const Instance& in) {
  const PlaneGraph& g = in.g;
  if (in.k() <= 1 || g.num_edges() == 0) {
    Instance out;
    out.hole = in.hole;
    if (in.k() == 0) {
      out.g = PlaneGraph::Build(0, {}, {}, -1);
      return out;
    }
    out.g = PlaneGraph::Build(1, {}, {{}}, -1);
    out.terms.assign(in.k(), 0);
    out.tdart.assign(in.k(), -1);
    return out;
  }
  std::vector<char> keep_e(g.num_edges(), 0), keep_v(g.num_vertices(), 0);
  std::vector<int> stamp(g.num_vertices(), -1);
  for (int i = 0; i < in.k(); ++i) {
    keep_v[in.terms[i]] = 1;
    ShortestPathTree t(g, in.terms[i]);
    stamp[in.terms[i]] = i;
    for (int j = i + 1; j < in.k(); ++j) {
      if (!t.reached(in.terms[j])) throw Error(ErrorKind::kUnreachable, "terminals disconnected");
      for (int x = in.terms[j]; stamp[x] != i; x = g.origin(t.parent_dart(x))) {
        stamp[x] = i;
        keep_e[PlaneGraph::edge_of(t.parent_dart(x))] = 1;
      }
    }
  }
  SubgraphResult sub = EdgeSubgraph(g, keep_e, &keep_v);
  EmbeddingEditor ed(sub.g);
  std::vector<int> handles;
  std::vector<char> is_term(sub.g.num_vertices(), 0);
  for (int i = 0; i < in.k(); ++i) {
    is_term[sub.vmap[in.terms[i]]] = 1;
    int d = in.tdart[i] >= 0 ? sub.MapCorner(g, in.tdart[i]) : -1;
    handles.push_back(ed.Track(d));
  }
  const int nv = sub.g.num_vertices();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < nv; ++v) {
      if (is_term[v]) continue;
      if (ed.degree(v) == 1) {
        ed.RemoveEdge(ed.rotation(v)[0] >> 1);
        changed = true;
      } else if (ed.degree(v) == 2) {
        ed.SuppressVertex(v);
        changed = true;
      }
    }
    for (int v = 0; v < nv; ++v) {
      std::map<int, int> best;  // neighbour -> edge
      std::vector<int> drop;
      for (int d : ed.rotation(v)) {
        int u = ed.head(d);
        int e = d >> 1;
        if (u == v) {
          drop.push_back(e);
          continue;
        }
        auto it = best.find(u);
        if (it == best.end()) {
          best[u] = e;
        } else {
          int keep = it->second;
          double wk = ed.weight(2 * keep), we = ed.weight(2 * e);
          if (we < wk || (we == wk && e < keep)) {
            drop.push_back(keep);
            it->second = e;
          } else {
            drop.push_back(e);
          }
        }
      }
      std::sort(drop.begin(), drop.end());
      drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
      for (int e : drop) {
        if (ed.alive_edge(e)) {
          ed.RemoveEdge(e);
          changed = true;
        }
      }
    }
  }
  std::vector<char> keep(nv, 0);
  for (int v = 0; v < nv; ++v) keep[v] = is_term[v];
  std::vector<int> vmap, dmap;
  int outer = ed.tracked(handles[0]);
  Instance out;
  out.g = ed.Compact(keep, &vmap, &dmap, outer);
  out.hole = in.hole;
  for (int i = 0; i < in.k(); ++i) {
    out.terms.push_back(vmap[sub.vmap[in.terms[i]]]);
    int d = ed.tracked(handles[i]);
    out.tdart.push_back(d >= 0 ? dmap[d] : -1);
  }
  return out;
}

}  // namespace emul
