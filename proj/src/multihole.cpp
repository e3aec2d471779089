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

#include "emul/multihole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace emul {

namespace {

// Corner of v on face f: the dart d with face(d) == f, preferring the
// corner of a terminal of hole h sitting at v.
int CornerOnFace(const Instance& in, int v, int f, int h) {
  for (int i = 0; i < in.k(); ++i) {
    if (in.terms[i] == v && in.hole[i] == h && in.tdart[i] >= 0) return in.tdart[i];
  }
  for (int d : in.g.rotation(v))
    if (in.g.face(d) == f) return d;
  return -1;
}

}  // namespace

SplitResult SplitH(const Instance& in, const Path& p, int hole_s, int hole_t,
                   const std::vector<int>& ys) {
  const PlaneGraph& g = in.g;
  if (hole_s == hole_t) throw Error(ErrorKind::kSameHoleEndpoints, "both ends on one hole");
  const auto faces = in.HoleFaces();
  const int h = in.num_holes();
  if (hole_s < 0 || hole_t < 0 || hole_s >= h || hole_t >= h || faces[hole_s] < 0 ||
      faces[hole_t] < 0) {
    throw Error(ErrorKind::kBadSpec, "unknown hole");
  }
  if (faces[hole_s] == faces[hole_t]) {
    throw Error(ErrorKind::kSameHoleEndpoints, "holes share a face");
  }
  const auto pv = p.Vertices(g);
  if (pv.empty()) throw Error(ErrorKind::kMalformedPath, "empty path");
  std::vector<char> is_term(g.num_vertices(), 0);
  for (int t : in.terms) is_term[t] = 1;
  for (size_t x = 1; x + 1 < pv.size(); ++x) {
    if (is_term[pv[x]]) {
      throw Error(ErrorKind::kTerminalOnPathInterior, "vertex " + std::to_string(pv[x]));
    }
  }
  std::vector<char> on_p(g.num_vertices(), 0);
  for (int v : pv) {
    if (on_p[v]) throw Error(ErrorKind::kMalformedPath, "path repeats a vertex");
    on_p[v] = 1;
  }
  SliceSpec spec;
  spec.fedge.assign(g.num_edges(), 0);
  spec.identified.assign(g.num_vertices(), 0);
  spec.cut_corner.assign(g.num_darts(), 0);
  for (int d : p.darts) spec.fedge[PlaneGraph::edge_of(d)] = 1;
  for (int y : ys) {
    if (y < 0 || y >= g.num_vertices() || !on_p[y]) {
      throw Error(ErrorKind::kInvalidPortalSet, "portal off the path");
    }
    spec.identified[y] = 1;
  }
  if (!spec.identified[pv.front()] || !spec.identified[pv.back()]) {
    throw Error(ErrorKind::kInvalidPortalSet, "portals must contain both endpoints");
  }
  const int cs = CornerOnFace(in, pv.front(), faces[hole_s], hole_s);
  const int ct = CornerOnFace(in, pv.back(), faces[hole_t], hole_t);
  if (cs < 0 || ct < 0) {
    throw Error(ErrorKind::kMalformedPath, "endpoint not on its hole");
  }
  spec.cut_corner[g.rot_prev(cs)] = 1;
  spec.cut_corner[g.rot_prev(ct)] = 1;
  for (int i = 0; i < in.k(); ++i) {
    int v = in.terms[i];
    if (spec.identified[v] && in.tdart[i] >= 0 && in.g.face(in.tdart[i]) != faces[hole_s] &&
        in.g.face(in.tdart[i]) != faces[hole_t]) {
      throw Error(ErrorKind::kInvalidPortalSet, "portal carries a terminal of a third hole");
    }
  }
  SplitResult res = SplitInstance(in, spec);
  if (res.pieces.size() != 1 || res.pieces[0].num_holes() != h - 1) {
    throw Error(ErrorKind::kInvalidPortalSet, "slice did not merge exactly two holes");
  }

  // A terminal that is a portal continues as one of its copies; give the
  // copy its own terminal next to it so every portal yields two copies.
  Instance& piece = res.pieces[0];
  auto& tparent = res.term_parent[0];
  auto& tvertex = res.term_vertex[0];
  std::vector<int> grown_at;  // piece terminals to duplicate
  for (int t = 0; t < piece.k(); ++t) {
    if (tparent[t] >= 0 && spec.identified[tvertex[t]]) grown_at.push_back(t);
  }
  if (!grown_at.empty()) {
    std::vector<int> shift(piece.k(), 0);
    for (int t = 0, add = 0, at = 0; t < piece.k(); ++t) {
      shift[t] = t + add;
      if (at < static_cast<int>(grown_at.size()) && grown_at[at] == t) {
        ++add;
        ++at;
      }
    }
    Instance grown;
    grown.g = piece.g;
    std::vector<int> gp, gv;
    std::vector<char> dup(piece.k(), 0);
    for (int t : grown_at) dup[t] = 1;
    for (int t = 0; t < piece.k(); ++t) {
      for (int c = 0; c < 1 + dup[t]; ++c) {
        grown.terms.push_back(piece.terms[t]);
        grown.tdart.push_back(piece.tdart[t]);
        grown.hole.push_back(piece.hole[t]);
        gp.push_back(c == 0 ? tparent[t] : -1);
        gv.push_back(tvertex[t]);
      }
    }
    for (auto& grp : res.plan.groups) {
      for (auto& [pc, ti] : grp.runs) {
        if (pc < 0) continue;
        ti = shift[ti] + (dup[ti] ? 1 : 0);
      }
    }
    for (auto& [pc, ti] : res.plan.term_src) {
      if (pc >= 0) ti = shift[ti];
    }
    piece = std::move(grown);
    tparent = std::move(gp);
    tvertex = std::move(gv);
    res.plan.piece_k[0] = piece.k();
  }
  return res;
}

Instance GlueH(const SplitPlan& plan, const Instance& emulator) {
  return Glue(plan, {emulator});
}

HoleMerge ChooseMerge(const Instance& in) {
  const int h = in.num_holes();
  if (h < 2) throw Error(ErrorKind::kBadSpec, "fewer than two holes");
  std::vector<int> count(h, 0);
  for (int x : in.hole)
    if (x >= 0) ++count[x];
  std::vector<int> order(h);
  for (int i = 0; i < h; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return count[a] > count[b]; });
  const int alpha = std::min(order[0], order[1]);
  const int beta = std::max(order[0], order[1]);
  const int u = in.terms[in.CircularOrder(alpha).front()];
  const int w = in.terms[in.CircularOrder(beta).front()];

  const PlaneGraph& g = in.g;
  const auto faces = in.HoleFaces();
  std::vector<int> hole_of_face(g.num_faces(), -1);
  for (int x = 0; x < h; ++x)
    if (faces[x] >= 0) hole_of_face[faces[x]] = x;
  std::vector<char> blocked(g.num_vertices(), 0);
  for (int i = 0; i < in.k(); ++i)
    if (in.hole[i] != alpha && in.hole[i] != beta) blocked[in.terms[i]] = 1;
  SearchOptions opt;
  opt.blocked = &blocked;
  ShortestPathTree tree(g, u, opt);
  Path full = tree.reached(w) ? tree.PathTo(w) : ShortestPath(g, u, w);
  const auto pv = full.Vertices(g);
  // Holes whose face each path vertex touches, the preferred one first.
  auto touches = [&](int v, int hole) {
    for (int d : g.rotation(v))
      if (hole_of_face[g.face(d)] == hole) return true;
    return false;
  };
  auto other_hole = [&](int v) {
    if (touches(v, beta)) return beta;
    int best = -1;
    for (int d : g.rotation(v)) {
      int x = hole_of_face[g.face(d)];
      if (x >= 0 && x != alpha && (best < 0 || x < best)) best = x;
    }
    return best;
  };
  int a = 0;
  for (int x = 0; x < static_cast<int>(pv.size()); ++x)
    if (touches(pv[x], alpha)) a = x;
  // Stop at the first vertex after the last visit of alpha that touches
  // any other hole, so the interior touches no hole face at all.
  int b = a;
  while (other_hole(pv[b]) < 0) ++b;
  HoleMerge m;
  m.hole_s = alpha;
  m.hole_t = other_hole(pv[b]);
  m.path.s = pv[a];
  m.path.t = pv[b];
  for (int x = a; x < b; ++x) {
    m.path.darts.push_back(full.darts[x]);
    m.path.weight += g.weight(full.darts[x]);
  }
  return m;
}

namespace {

struct MultiRun {
  EmulatorReport* report;
  EmulatorParams p;
  double share = 0;  // eps / h of the top-level call

  Instance Run(const Instance& in) {
    const int h = in.num_holes();
    if (report) report->stage_sizes.push_back(in.k());
    if (h <= 1) {
      std::vector<int> perm;
      Instance one = AsOneHole(in, &perm);
      EmulatorParams q = p;
      q.eps = share;
      EmulatorReport sub;
      Instance em = OneHoleEmulator(one, q, &sub);
      if (report) {
        report->stage_eps.emplace_back("onehole", share);
        report->depth = std::max(report->depth, sub.depth);
        report->decompose_calls += sub.decompose_calls;
        report->base_leaves += sub.base_leaves;
        report->fallback_leaves += sub.fallback_leaves;
        for (auto& st : sub.steps) report->steps.push_back(st);
      }
      Instance out;
      out.g = em.g;
      out.terms.assign(in.k(), -1);
      out.tdart.assign(in.k(), -1);
      out.hole = in.hole;
      for (int i = 0; i < em.k(); ++i) {
        out.terms[perm[i]] = em.terms[i];
        out.tdart[perm[i]] = em.tdart[i];
      }
      return out;
    }
    HoleMerge m = ChooseMerge(in);
    const auto pv = m.path.Vertices(in.g);
    std::vector<int> others;
    for (int t : in.terms) others.push_back(t);
    std::vector<int> ys = EpsCoverUnion(in.g, m.path, others, share);
    ys.push_back(pv.front());
    ys.push_back(pv.back());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    const auto dist = AllTerminalDistances(in.g, in.terms);
    SplitResult sr = SplitH(in, m.path, m.hole_s, m.hole_t, ys);
    Instance back = GlueH(sr.plan, sr.pieces[0]);
    double delta = LogDistortion(dist, AllTerminalDistances(back.g, back.terms));
    if (delta > share * (1 + 1e-12)) {
      // The path can be longer than a shortest path when terminals block
      // it; keeping every path vertex makes the slice exact.
      ys = pv;
      std::sort(ys.begin(), ys.end());
      sr = SplitH(in, m.path, m.hole_s, m.hole_t, ys);
      back = GlueH(sr.plan, sr.pieces[0]);
      delta = LogDistortion(dist, AllTerminalDistances(back.g, back.terms));
    }
    if (report) {
      report->stage_eps.emplace_back("merge", share);
      StepStats st;
      st.kind = "merge";
      st.r = in.k();
      st.piece_k = sr.plan.piece_k;
      st.delta = delta;
      report->steps.push_back(st);
    }
    Instance child = Run(sr.pieces[0]);
    return GlueH(sr.plan, child);
  }
};

}  // namespace

Instance MultiHoleEmulator(const Instance& in, const EmulatorParams& p, EmulatorReport* report) {
  for (int x : in.hole) {
    if (x < 0) throw Error(ErrorKind::kBadSpec, "terminal without a hole");
  }
  const int h = std::max(1, in.num_holes());
  MultiRun run{report, p, p.eps / h};
  Instance out = run.Run(in);
  if (!Aligned(in, out)) {
    throw Error(ErrorKind::kDistortionBudgetExceeded, "emulator not aligned with its input");
  }
  const double delta = LogDistortion(AllTerminalDistances(in.g, in.terms),
                                     AllTerminalDistances(out.g, out.terms));
  if (delta > p.eps * (1 + 1e-9)) {
    throw Error(ErrorKind::kDistortionBudgetExceeded,
                "measured " + std::to_string(delta) + " > " + std::to_string(p.eps));
  }
  if (report) {
    report->mode = "multihole";
    report->eps = p.eps;
    report->k = in.k();
    report->input_vertices = in.g.num_vertices();
    report->output_vertices = out.g.num_vertices();
    report->output_edges = out.g.num_edges();
    report->max_distortion = delta;
  }
  return out;
}

}  // namespace emul
