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

// Acceptance run: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "emul/harness.hpp"
#include "emul/pipeline.hpp"

namespace {

using namespace emul;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string note;
};

int failures = 0;

void Report(int id, const char* name, const Outcome& o) {
  std::printf("criterion %d %-28s %s  %s\n", id, name, o.pass ? "PASS" : "FAIL", o.note.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

GeneratorSpec Spec(std::string fam, int m, int k, std::string w, std::string place,
                   uint64_t seed = 1) {
  GeneratorSpec s;
  s.family = fam;
  s.m = m;
  s.k = k;
  s.weights = w;
  s.placement = place;
  s.seed = seed;
  return s;
}

// Every decomposition step seen anywhere in the run.
std::vector<StepStats> all_steps;

// 1. Distortion soundness over the regression matrix.
Outcome Soundness() {
  struct Row {
    GeneratorSpec spec;
    std::string mode;
  };
  std::vector<Row> rows = {
      {Spec("grid", 65, 256, "unit", "boundary"), "onehole"},
      {Spec("grid", 64, 128, "uniform", "boundary", 2), "onehole"},
      {Spec("grid", 32, 124, "loguniform", "boundary", 3), "onehole"},
      {Spec("halved-grid", 48, 96, "uniform", "boundary", 4), "onehole"},
      {Spec("overlay", 48, 128, "uniform", "boundary", 5), "onehole"},
      {Spec("spread-stress", 32, 64, "unit", "boundary", 6), "onehole"},
      {Spec("annulus", 64, 128, "uniform", "holes", 7), "multihole"},
      {Spec("annulus", 40, 64, "loguniform", "holes", 8), "multihole"},
      {Spec("grid", 64, 256, "uniform", "random", 9), "general"},
      {Spec("random-triangulation", 5000, 64, "uniform", "random", 10), "general"},
      {Spec("annulus", 64, 96, "loguniform", "random", 11), "general"},
      {Spec("grid", 64, 16, "unit", "random", 12), "bootstrap"},
      {Spec("random-triangulation", 5000, 32, "uniform", "random", 13), "bootstrap"},
  };
  Outcome o;
  int runs = 0;
  double worst = 0;
  for (const Row& row : rows) {
    Instance in = Generate(row.spec);
    auto exact = ExactOracle(in);
    for (double eps : {0.5, 0.25, 0.1}) {
      auto t0 = Clock::now();
      EmulatorReport rep;
      std::string err;
      Instance out;
      try {
        out = Emulate(in, row.mode, eps, {}, &rep);
      } catch (const Error& e) {
        err = e.what();
      }
      bool pass = false;
      double ratio = 0;
      if (err.empty()) {
        auto v = VerifyEmulator(in, out, eps, &exact);
        pass = v.pass;
        ratio = eps > 0 ? v.max_log / eps : 0;
        worst = std::max(worst, ratio);
      }
      for (const auto& st : rep.steps) all_steps.push_back(st);
      ++runs;
      std::fprintf(stderr, "  [1] %-21s n=%-5d k=%-3d eps=%.2f %-9s -> %5d verts  %s %.2fs %s\n",
                   row.spec.family.c_str(), in.g.num_vertices(), in.k(), eps, row.mode.c_str(),
                   err.empty() ? out.g.num_vertices() : -1, pass ? "ok" : "FAIL", Seconds(t0),
                   err.c_str());
      if (!pass) o.pass = false;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d runs, worst distortion %.2f of budget", runs, worst);
  o.note = buf;
  return o;
}

// 2. Base case exactness.
Outcome BaseExact() {
  Outcome o;
  const char* fams[] = {"grid", "halved-grid", "annulus", "overlay", "random-triangulation"};
  const char* ws[] = {"unit", "uniform", "loguniform"};
  double worst = 0;
  for (int seed = 1; seed <= 50; ++seed) {
    std::string fam = fams[seed % 5];
    int m = fam == "random-triangulation" ? 400 : 20;
    int k = 2 + seed % 31;
    // Random triangulations have few hull vertices, so their terminals go anywhere.
    const bool boundary = seed % 2 && fam != "random-triangulation";
    Instance in = Generate(Spec(fam, m, k, ws[seed % 3], boundary ? "boundary" : "random", seed));
    Instance out = BaseZeroEmulator(in);
    auto a = ExactOracle(in), b = ExactOracle(out);
    for (int i = 0; i < in.k(); ++i)
      for (int j = 0; j < in.k(); ++j) {
        double rel = a[i][j] > 0 ? std::fabs(a[i][j] - b[i][j]) / a[i][j] : std::fabs(b[i][j]);
        worst = std::max(worst, rel);
      }
  }
  o.pass = worst <= 1e-9;
  char buf[96];
  std::snprintf(buf, sizeof buf, "50 instances, worst relative error %.1e", worst);
  o.note = buf;
  return o;
}

// 3. Size against k and n.
Outcome SizeScaling() {
  Outcome o;
  const double eps = 0.25;
  auto size_of = [&](int m, int k) {
    Instance in = Generate(Spec("grid", m, k, "unit", "boundary", 21));
    Instance out = OneHoleEmulator(in, EmulatorParams::Desk(eps));
    return out.g.num_vertices();
  };
  std::vector<double> lx, ly;
  for (int k : {32, 64, 128, 256}) {
    int s = size_of(96, k);
    std::fprintf(stderr, "  [3] grid 96x96 k=%d -> %d\n", k, s);
    lx.push_back(std::log(k));
    ly.push_back(std::log(s));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / ly.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  const int small = size_of(64, 64), large = size_of(128, 64);
  const double change = std::fabs(static_cast<double>(large) / small - 1);
  std::fprintf(stderr, "  [3] k=64: 64x64 -> %d, 128x128 -> %d\n", small, large);
  o.pass = slope <= 1.35 && change <= 0.5;
  char buf[128];
  std::snprintf(buf, sizeof buf, "slope %.3f (<= 1.35), size change at 4n %.0f%% (<= 50%%)", slope,
                100 * change);
  o.note = buf;
  return o;
}

// 4. Decomposition contract on every step collected so far.
Outcome Contract() {
  // Extra one-hole runs so the large-spread branch is exercised as well.
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    EmulatorReport rep;
    Instance in = Generate(Spec(seed % 2 ? "spread-stress" : "grid", 40, 120,
                                seed % 2 ? "unit" : "loguniform", "boundary", 30 + seed));
    OneHoleEmulator(in, EmulatorParams::Desk(0.25), &rep);
    for (const auto& st : rep.steps) all_steps.push_back(st);
  }
  EmulatorParams p;
  p.sum_c = 8;
  p.piece_frac = 0.9;
  Outcome o;
  int checked = 0, bad = 0;
  for (const auto& st : all_steps) {
    if (st.kind == "merge") continue;
    ++checked;
    if (!st.covered || !StepContractHolds(st.r, st.piece_k, p)) {
      ++bad;
      std::fprintf(stderr, "  [4] step %s r=%d violates the contract\n", st.kind.c_str(), st.r);
    }
  }
  o.pass = bad == 0 && checked > 0;
  o.note = std::to_string(checked) + " steps, " + std::to_string(bad) + " violations";
  return o;
}

std::vector<double> Dijkstra(const PlaneGraph& g, int s) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.num_vertices());
  for (const Edge& e : g.edges()) {
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }
  std::vector<double> d(g.num_vertices(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv > d[v]) continue;
    for (auto [u, w] : adj[v])
      if (dv + w < d[u]) d[u] = dv + w, pq.push({d[u], u});
  }
  return d;
}

// 5. Cover property.
Outcome Covers() {
  Outcome o;
  std::mt19937_64 rng(2025);
  int triples = 0, invalid = 0, oversized = 0;
  double worst = 0;
  const char* fams[] = {"grid", "random-triangulation", "overlay", "annulus"};
  const char* ws[] = {"unit", "uniform", "loguniform"};
  for (int gi = 0; triples < 10000; ++gi) {
    std::string fam = fams[gi % 4];
    Instance in = Generate(Spec(fam, fam == "random-triangulation" ? 300 : 16, 0, ws[gi % 3],
                                "random", 500 + gi));
    const PlaneGraph& g = in.g;
    std::uniform_int_distribution<int> pick(0, g.num_vertices() - 1);
    std::uniform_real_distribution<double> ue(0.02, 1.0);
    for (int q = 0; q < 100; ++q, ++triples) {
      Path p = ShortestPath(g, pick(rng), pick(rng));
      const int v = pick(rng);
      const double eps = ue(rng);
      auto cover = EpsCover(g, p, v, eps);
      auto dv = Dijkstra(g, v);
      auto pv = p.Vertices(g);
      std::vector<double> pre{0};
      for (int d : p.darts) pre.push_back(pre.back() + g.weight(d));
      std::vector<int> at;
      for (int c : cover) at.push_back(static_cast<int>(std::find(pv.begin(), pv.end(), c) - pv.begin()));
      bool ok = true;
      for (size_t x = 0; x < pv.size() && ok; ++x) {
        bool hit = false;
        for (int ci : at) {
          if (ci >= static_cast<int>(pv.size())) continue;
          double via = dv[pv[ci]] + std::fabs(pre[ci] - pre[x]);
          if (via <= (1 + eps) * dv[pv[x]] * (1 + 1e-9) + 1e-12) hit = true;
        }
        ok = hit;
      }
      if (!ok) ++invalid;
      if (cover.size() > 16.0 / eps) ++oversized;
      worst = std::max(worst, cover.size() * eps);
    }
  }
  o.pass = invalid == 0 && oversized == 0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d triples, %d invalid, %d above 16/eps, max |C|*eps %.2f",
                triples, invalid, oversized, worst);
  o.note = buf;
  return o;
}

// Side of dart e around v relative to path a passing through v at index t:
// +1 left, -1 right, 0 if a ends at v.
int SideOf(const PlaneGraph& g, const Path& a, int t, int e) {
  if (t == 0 || t == a.hops()) return 0;
  const int out = a.darts[t];
  const int back = PlaneGraph::twin(a.darts[t - 1]);
  for (int d = g.rot(out); d != back; d = g.rot(d))
    if (d == e) return 1;
  return -1;
}

// Whether b crosses a (they meet in one common subpath, by the tie-break).
bool Crosses(const PlaneGraph& g, const Path& a, const Path& b) {
  auto av = a.Vertices(g), bv = b.Vertices(g);
  std::vector<int> apos(g.num_vertices(), -1);
  for (size_t i = 0; i < av.size(); ++i) apos[av[i]] = static_cast<int>(i);
  int first = -1, last = -1;
  for (size_t j = 0; j < bv.size(); ++j)
    if (apos[bv[j]] >= 0) {
      if (first < 0) first = static_cast<int>(j);
      last = static_cast<int>(j);
    }
  if (first < 0 || first == 0 || last == b.hops()) return false;
  const int enter = PlaneGraph::twin(b.darts[first - 1]);  // out of bv[first], backwards
  const int leave = b.darts[last];
  const int s1 = SideOf(g, a, apos[bv[first]], enter);
  const int s2 = SideOf(g, a, apos[bv[last]], leave);
  return s1 != 0 && s2 != 0 && s1 != s2;
}

// 6. Monge and non-crossing.
Outcome MongeNoncrossing() {
  Outcome o;
  std::mt19937_64 rng(6);
  int quads = 0, monge_bad = 0, pair_bad = 0, cross_bad = 0, path_pairs = 0;
  int detect_total = 0, detect_hit = 0;
  for (int seed = 1; seed <= 8; ++seed) {
    std::string fam = seed % 2 ? "grid" : "overlay";
    Instance in = Generate(Spec(fam, 24, 64, seed % 2 ? "uniform" : "loguniform", "boundary", seed));
    auto d = AllTerminalDistances(in.g, in.terms);
    std::uniform_int_distribution<int> pick(0, in.k() - 1);
    for (int q = 0; q < 1000;) {
      std::vector<int> s = {pick(rng), pick(rng), pick(rng), pick(rng)};
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
      ++q, ++quads;
      const double cross = d[s[0]][s[2]] + d[s[1]][s[3]];
      const double tol = 1e-12 * cross;
      if (cross + tol < d[s[0]][s[1]] + d[s[2]][s[3]] ||
          cross + tol < d[s[0]][s[3]] + d[s[1]][s[2]]) {
        ++monge_bad;
      }
      // Interleaved pairs must cross unless one path ends on the other;
      // this keeps the crossing test below honest.
      if (q % 20 == 0) {
        Path a = ShortestPath(in.g, in.terms[s[0]], in.terms[s[2]]);
        Path b = ShortestPath(in.g, in.terms[s[1]], in.terms[s[3]]);
        auto av = a.Vertices(in.g), bv = b.Vertices(in.g);
        std::set<int> sa(av.begin(), av.end()), sb(bv.begin(), bv.end());
        if (!sa.count(b.s) && !sa.count(b.t) && !sb.count(a.s) && !sb.count(a.t)) {
          ++detect_total;
          if (Crosses(in.g, a, b)) ++detect_hit;
        }
      }
    }
  }
  // Few terminals and log-uniform weights give several clusters per level.
  for (int seed = 1; seed <= 40; ++seed) {
    Instance in = Generate(Spec(seed % 4 ? "grid" : "spread-stress", 24, 12,
                                seed % 4 ? "loguniform" : "unit", "boundary", 100 + seed));
    auto d = AllTerminalDistances(in.g, in.terms);
    ClusterHierarchy h = BuildClusterHierarchy(d, in.k(), EmulatorParams{});
    for (const auto& level : h.levels) {
      std::vector<int> big;
      for (int c : level)
        if (h.clusters[c].members.size() >= 2) big.push_back(c);
      for (size_t i = 0; i < big.size(); ++i) {
        for (size_t j = i + 1; j < big.size(); ++j) {
          const auto& m1 = h.clusters[big[i]].members;
          const auto& m2 = h.clusters[big[j]].members;
          std::uniform_int_distribution<size_t> p1(0, m1.size() - 1), p2(0, m2.size() - 1);
          for (int z = 0; z < 16; ++z) {
            int a1 = m1[p1(rng)], a2 = m1[p1(rng)], b1 = m2[p2(rng)], b2 = m2[p2(rng)];
            if (a1 == a2 || b1 == b2) continue;
            if (a1 > a2) std::swap(a1, a2);
            bool r_in = a1 < b1 && b1 < a2;
            bool s_in = a1 < b2 && b2 < a2;
            if (r_in != s_in) ++pair_bad;
            Path a = ShortestPath(in.g, in.terms[a1], in.terms[a2]);
            Path b = ShortestPath(in.g, in.terms[b1], in.terms[b2]);
            ++path_pairs;
            if (Crosses(in.g, a, b) || Crosses(in.g, b, a)) ++cross_bad;
          }
        }
      }
    }
  }
  o.pass = monge_bad == 0 && pair_bad == 0 && cross_bad == 0 && path_pairs > 0 &&
           detect_hit == detect_total;
  std::fprintf(stderr, "  [6] interleaved control pairs detected as crossing: %d/%d\n",
               detect_hit, detect_total);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d quadruples (%d Monge violations), %d cluster path pairs (%d crossing)", quads,
                monge_bad, path_pairs, pair_bad + cross_bad);
  o.note = buf;
  return o;
}

// 7. r-division contract.
Outcome DivisionContract() {
  Outcome o;
  DivisionParams p;
  struct Case {
    GeneratorSpec spec;
    int r;
  };
  std::vector<Case> cases = {
      {Spec("grid", 64, 256, "uniform", "random", 1), 16},
      {Spec("grid", 64, 64, "uniform", "random", 2), 64},
      {Spec("grid", 64, 16, "unit", "random", 3), 256},
      {Spec("random-triangulation", 5000, 64, "uniform", "random", 4), 78},
      {Spec("random-triangulation", 5000, 256, "uniform", "random", 5), 19},
      {Spec("annulus", 64, 96, "loguniform", "random", 6), 37},
      {Spec("annulus", 64, 128, "uniform", "holes", 7), 100},
      {Spec("overlay", 48, 64, "uniform", "random", 8), 36},
  };
  int pieces = 0, bad = 0;
  for (const Case& c : cases) {
    Instance in = Generate(c.spec);
    RDivision div = RDivide(in, c.r, p);
    const double tb = p.c_div * (1.0 + static_cast<double>(in.k()) * c.r / in.g.num_vertices());
    int maxb = 0, maxh = 0;
    for (const RPiece& pc : div.pieces) {
      ++pieces;
      maxb = std::max(maxb, static_cast<int>(pc.boundary.size()));
      maxh = std::max(maxh, pc.holes);
      if (static_cast<int>(pc.vertices.size()) > c.r ||
          pc.boundary.size() > p.c_div * std::sqrt(c.r) || pc.holes > p.h_max ||
          pc.terminals.size() > tb) {
        ++bad;
      }
    }
    std::fprintf(stderr, "  [7] %-21s n=%-5d r=%-3d pieces=%-4zu max boundary %d, max holes %d\n",
                 c.spec.family.c_str(), in.g.num_vertices(), c.r, div.pieces.size(), maxb, maxh);
  }
  o.pass = bad == 0;
  o.note = std::to_string(pieces) + " pieces, " + std::to_string(bad) + " violations";
  return o;
}

// 8. Oracle correctness and build time.
Outcome Oracles() {
  Outcome o;
  struct Case {
    GeneratorSpec spec;
    std::string mode;
    double eps;
  };
  std::vector<Case> cases = {
      {Spec("grid", 64, 128, "uniform", "boundary", 1), "onehole", 0.25},
      {Spec("annulus", 48, 64, "uniform", "holes", 2), "multihole", 0.25},
      {Spec("random-triangulation", 4000, 64, "uniform", "random", 3), "general", 0.5},
  };
  std::mt19937_64 rng(8);
  int bad = 0, queries = 0;
  double build64 = 0;
  for (const Case& c : cases) {
    Instance in = Generate(c.spec);
    auto t0 = Clock::now();
    DistanceOracle oracle = DistanceOracle::Build(in, c.eps, c.mode);
    double secs = Seconds(t0);
    if (c.mode == "onehole") build64 = secs;
    auto exact = ExactOracle(in);
    std::uniform_int_distribution<int> pick(0, in.k() - 1);
    for (int q = 0; q < 1000; ++q, ++queries) {
      int a = pick(rng), b = pick(rng);
      double got = oracle.Query(a, b);
      double want = exact[a][b];
      bool ok = a == b ? got == 0
                       : got >= want * std::exp(-c.eps) * (1 - 1e-9) &&
                             got <= want * std::exp(c.eps) * (1 + 1e-9);
      if (!ok) ++bad;
    }
    std::fprintf(stderr, "  [8] %-21s %s build %.2fs\n", c.spec.family.c_str(), c.mode.c_str(),
                 secs);
  }
  o.pass = bad == 0 && build64 < 30;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d queries, %d out of bound, 64x64 build %.2fs (< 30s)", queries,
                bad, build64);
  o.note = buf;
  return o;
}

// 9. Determinism.
Outcome Determinism() {
  Outcome o;
  struct Case {
    GeneratorSpec spec;
    std::string mode;
  };
  std::vector<Case> cases = {
      {Spec("grid", 32, 96, "loguniform", "boundary", 3), "onehole"},
      {Spec("annulus", 30, 48, "uniform", "holes", 4), "multihole"},
      {Spec("random-triangulation", 2000, 48, "uniform", "random", 5), "general"},
      {Spec("grid", 48, 12, "uniform", "random", 6), "bootstrap"},
  };
  int same = 0;
  for (const Case& c : cases) {
    std::string a = DumpCanonical(InstanceToJson(Emulate(Generate(c.spec), c.mode, 0.25)));
    std::string b = DumpCanonical(InstanceToJson(Emulate(Generate(c.spec), c.mode, 0.25)));
    if (a == b) ++same;
  }
  o.pass = same == static_cast<int>(cases.size());
  o.note = std::to_string(same) + "/" + std::to_string(cases.size()) + " modes byte-identical";
  return o;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  Report(1, "distortion-soundness", Soundness());
  Report(2, "base-case-exactness", BaseExact());
  Report(3, "size-near-linear-in-k", SizeScaling());
  Report(4, "decomposition-contract", Contract());
  Report(5, "eps-cover", Covers());
  Report(6, "monge-noncrossing", MongeNoncrossing());
  Report(7, "r-division-contract", DivisionContract());
  Report(8, "oracle-correctness", Oracles());
  Report(9, "determinism", Determinism());
  std::printf("acceptance: %d/9 passed in %.1fs\n", 9 - failures, Seconds(t0));
  return failures == 0 ? 0 : 1;
}
