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
#include <optional>
#include <set>
#include <tuple>

#include "emul/onehole.hpp"

namespace emul {

int EmulatorParams::LambdaStar(int k) const {
  double lg = std::log2(std::max(2, k));
  double v = lambda_c * lg * lg / std::pow(eps, lambda_p);
  if (!(v < 1e9)) v = 1e9;
  return std::max(lambda_min, static_cast<int>(std::ceil(v)));
}

EmulatorParams EmulatorParams::Desk(double eps) {
  EmulatorParams p;
  p.eps = eps;
  p.lambda_c = 0;
  return p;
}

double LogDistortion(const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b) {
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = i + 1; j < a.size(); ++j) {
      double x = a[i][j], y = b[i][j];
      if (x == y) continue;
      if (x <= 0 || y <= 0 || x == kInf || y == kInf) return kInf;
      worst = std::max(worst, std::fabs(std::log(x / y)));
    }
  }
  return worst;
}

bool StepContractHolds(int r, const std::vector<int>& piece_k, const EmulatorParams& p) {
  const double lg = std::log2(std::max(2, r));
  const int lam = static_cast<int>(std::floor(lg * lg));
  long long sum = 0, heavy = 0;
  for (int k : piece_k) {
    if (k > p.piece_frac * r) return false;
    sum += k;
    if (k > lam) heavy += k;
  }
  if (sum > p.sum_c * r) return false;
  return lam <= 0 || heavy <= r * (1.0 + p.sum_c / lam);
}

namespace {

// Shortest-path distances from every terminal to every vertex.
struct Fields {
  explicit Fields(const Instance& in) : in(in) {
    for (int t : in.terms) field.push_back(ShortestPathTree(in.g, t).dists());
    dist.assign(in.k(), std::vector<double>(in.k(), 0));
    for (int i = 0; i < in.k(); ++i)
      for (int j = 0; j < in.k(); ++j) dist[i][j] = field[i][in.terms[j]];
  }
  const Instance& in;
  std::vector<std::vector<double>> field;
  std::vector<std::vector<double>> dist;
};

CombineNode LeafPlan(const SplitPlan& plan) {
  CombineNode n;
  n.kind = CombineNode::Kind::kSplit;
  n.plan = plan;
  for (int i = 0; i < plan.num_pieces; ++i) {
    CombineNode leaf;
    leaf.leaf = i;
    n.children.push_back(std::move(leaf));
  }
  return n;
}

void OffsetLeaves(CombineNode* n, int off) {
  if (n->kind == CombineNode::Kind::kLeaf) {
    n->leaf += off;
    return;
  }
  for (auto& c : n->children) OffsetLeaves(&c, off);
}

double Measure(const CombineNode& plan, const std::vector<Instance>& pieces,
               const std::vector<std::vector<double>>& dist) {
  Instance c = Combine(plan, pieces);
  if (c.k() != static_cast<int>(dist.size())) return kInf;
  return LogDistortion(AllTerminalDistances(c.g, c.terms), dist);
}

std::vector<double> EpsSchedule(double allowed, double budget) {
  std::vector<double> out;
  double e = std::max(allowed, 1e-6);
  while (true) {
    out.push_back(std::min(e, budget));
    if (e >= budget) break;
    e *= 2;
  }
  return out;
}

// Y = path endpoints and branch vertices plus a joint eps_r-cover of all
// terminals on every path.
std::vector<int> CoverPortals(const Fields& f, const PathSet& ps, double eps_r) {
  std::set<int> ys(ps.portals.begin(), ps.portals.end());
  const PlaneGraph& g = f.in.g;
  for (const Path& p : ps.paths) {
    auto pv = p.Vertices(g);
    std::vector<double> prefix{0};
    for (int d : p.darts) prefix.push_back(prefix.back() + g.weight(d));
    std::vector<char> chosen(pv.size(), 0);
    std::vector<double> dv(pv.size());
    for (int i = 0; i < f.in.k(); ++i) {
      for (size_t x = 0; x < pv.size(); ++x) dv[x] = f.field[i][pv[x]];
      ExtendCover(prefix, dv, eps_r, &chosen);
    }
    for (size_t x = 0; x < pv.size(); ++x)
      if (chosen[x]) ys.insert(pv[x]);
  }
  return {ys.begin(), ys.end()};
}

// Portals on one path chosen greedily so that every pair of terminals on
// opposite sides keeps a (1 + eps_r) route through some portal. Same-side
// pairs never need one: a shortest path meets P in one subpath.
std::vector<int> PairPortals(const Fields& f, const Path& path, int i, int j, double eps_r) {
  const Instance& in = f.in;
  const auto pv = path.Vertices(in.g);
  const int m = static_cast<int>(pv.size());
  std::vector<char> on_p(in.g.num_vertices(), 0);
  for (int v : pv) on_p[v] = 1;
  std::vector<int> side_a, side_b;
  for (int t = 0; t < in.k(); ++t) {
    if (on_p[in.terms[t]]) continue;
    (t > i && t < j ? side_a : side_b).push_back(t);
  }
  struct Need {
    int a, b;
    double target, best;
  };
  std::vector<Need> need;
  std::vector<char> chosen(m, 0);
  chosen[0] = chosen[m - 1] = 1;
  for (int a : side_a) {
    for (int b : side_b) {
      Need n{a, b, (1 + eps_r) * f.dist[a][b] * (1 + 1e-12), kInf};
      for (int x : {0, m - 1}) {
        n.best = std::min(n.best, f.field[a][pv[x]] + f.field[b][pv[x]]);
      }
      if (n.best > n.target) need.push_back(n);
    }
  }
  while (!need.empty()) {
    int pick = -1;
    size_t most = 0;
    for (int x = 1; x + 1 < m; ++x) {
      if (chosen[x]) continue;
      size_t cnt = 0;
      for (const Need& n : need) cnt += f.field[n.a][pv[x]] + f.field[n.b][pv[x]] <= n.target;
      if (cnt > most) {
        most = cnt;
        pick = x;
      }
    }
    if (pick < 0) break;
    chosen[pick] = 1;
    std::vector<Need> rest;
    for (const Need& n : need) {
      if (f.field[n.a][pv[pick]] + f.field[n.b][pv[pick]] > n.target) rest.push_back(n);
    }
    need = std::move(rest);
  }
  std::vector<int> out;
  for (int x = 0; x < m; ++x)
    if (chosen[x]) out.push_back(pv[x]);
  return out;
}

std::optional<Decomposition> TrySplit(const Fields& f, const PathSet& ps, const EmulatorParams& p,
                                      double budget, const std::string& kind) {
  const Instance& in = f.in;
  SplitResult sr;
  try {
    sr = Split(in, ps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInvalidPortalSet) throw;
    return std::nullopt;
  }
  StepStats st;
  st.kind = kind;
  st.r = in.k();
  st.piece_k = sr.plan.piece_k;
  for (auto [piece, ti] : sr.plan.term_src) st.covered = st.covered && piece >= 0;
  if (!st.covered || sr.pieces.size() < 2 || !StepContractHolds(st.r, st.piece_k, p)) {
    return std::nullopt;
  }
  Decomposition d;
  d.plan = LeafPlan(sr.plan);
  d.pieces = std::move(sr.pieces);
  d.delta = Measure(d.plan, d.pieces, f.dist);
  if (d.delta > budget) return std::nullopt;
  st.delta = d.delta;
  d.stats = st;
  d.ok = true;
  return d;
}

Decomposition SmallSpread(const Fields& f, const EmulatorParams& p, double allowed,
                          double budget) {
  const Instance& in = f.in;
  const int r = in.k();
  if (r < 4) throw Error(ErrorKind::kNoBalancedPair, "fewer than 4 terminals");
  std::vector<std::tuple<double, int, int>> cand;
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      int gap = j - i;
      if (4 * gap > 3 * r || 4 * (r - gap) > 3 * r) continue;
      if (f.dist[i][j] <= 0) continue;
      cand.emplace_back(f.dist[i][j], i, j);
    }
  }
  std::sort(cand.begin(), cand.end());
  constexpr size_t kMaxCandidates = 48;
  if (cand.size() > kMaxCandidates) cand.resize(kMaxCandidates);
  // Paths avoid other terminals when that costs nothing.
  std::vector<char> blocked(in.g.num_vertices(), 0);
  for (int t : in.terms) blocked[t] = 1;
  SearchOptions avoid;
  avoid.blocked = &blocked;
  std::vector<std::optional<Path>> paths(cand.size());
  for (double eps_r : EpsSchedule(allowed, budget)) {
    for (size_t c = 0; c < cand.size(); ++c) {
      auto [d, i, j] = cand[c];
      if (!paths[c]) {
        int u = in.terms[i], v = in.terms[j];
        Path best = ShortestPath(in.g, u, v);
        ShortestPathTree t(in.g, u, avoid);
        if (t.reached(v) && t.dist(v) <= best.weight * (1 + 1e-12)) best = t.PathTo(v);
        paths[c] = best;
      }
      PathSet ps;
      ps.pairs = {{i, j}};
      ps.paths = {*paths[c]};
      ps.portals = PairPortals(f, *paths[c], i, j, eps_r);
      auto dec = TrySplit(f, ps, p, budget, "small");
      if (dec) return *dec;
    }
  }
  return {};
}

std::optional<Decomposition> BorderSplit(const Fields& f, const std::vector<int>& members,
                                         const EmulatorParams& p, double allowed,
                                         double budget, const std::string& kind) {
  const int r = f.in.k();
  std::vector<char> in_s(r, 0);
  for (int m : members) in_s[m] = 1;
  std::set<std::pair<int, int>> pairs;
  const int s = static_cast<int>(members.size());
  for (int a = 0; a < s; ++a) {
    int x = members[a], y = members[(a + 1) % s];
    if (x == y) continue;
    int gap = (y - x + r) % r - 1;
    if (gap <= 0) continue;
    pairs.insert({std::min(x, y), std::max(x, y)});
  }
  if (pairs.empty()) return std::nullopt;
  PathSet ps;
  try {
    ps = NoncrossingShortestPaths(f.in, {pairs.begin(), pairs.end()});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kCrossingPairs) throw;
    return std::nullopt;
  }
  if (ps.branch.size() > p.branch_c * r) return std::nullopt;
  for (const Path& q : ps.paths)
    if (q.darts.empty()) return std::nullopt;
  for (double eps_r : EpsSchedule(allowed, budget)) {
    PathSet cur = ps;
    cur.portals = CoverPortals(f, ps, eps_r);
    auto dec = TrySplit(f, cur, p, budget, kind);
    if (dec) return dec;
  }
  return std::nullopt;
}

Decomposition LargeSpread(const Fields& f, const ClusterHierarchy& h, const EmulatorParams& p,
                          double allowed, double budget) {
  const int r = f.in.k();
  // Balanced case: a non-expanding cluster of moderate size.
  int tried = 0;
  for (size_t c = 0; c < h.clusters.size() && tried < 8; ++c) {
    const auto& cl = h.clusters[c];
    int sz = static_cast<int>(cl.members.size());
    if (cl.level >= h.L || cl.expanding || 5 * sz < r || 5 * sz > 4 * r) continue;
    ++tried;
    auto dec = BorderSplit(f, cl.members, p, allowed, budget, "large-balanced");
    if (dec) return *dec;
  }
  // Unbalanced case: the lowest non-expanding heavy cluster.
  int heavy = -1;
  for (size_t c = 0; c < h.clusters.size(); ++c) {
    const auto& cl = h.clusters[c];
    if (cl.level >= h.L || cl.expanding || 5 * static_cast<int>(cl.members.size()) <= 4 * r) {
      continue;
    }
    heavy = static_cast<int>(c);
    break;
  }
  if (heavy >= 0) {
    const auto& cl = h.clusters[heavy];
    auto dec = BorderSplit(f, cl.members, p, allowed, budget, "large-unbalanced");
    if (dec) return *dec;
    // Pull the terminals outside the heavy cluster and fall through to the
    // small-spread split of the pulled instance.
    std::vector<char> pull(r, 1);
    for (int m : cl.members) pull[m] = 0;
    double w = std::pow(h.mu, cl.level - 1) * h.scale;
    Instance pulled = PullTerminals(f.in, pull, w);
    Fields pf(pulled);
    Decomposition inner = SmallSpread(pf, p, allowed, budget);
    if (inner.ok) {
      Decomposition d;
      d.plan.kind = CombineNode::Kind::kPull;
      d.plan.pull_weight = w;
      d.plan.pulled = r - static_cast<int>(cl.members.size());
      d.plan.children.push_back(inner.plan);
      d.pieces = std::move(inner.pieces);
      d.delta = Measure(d.plan, d.pieces, f.dist);
      if (d.delta <= budget) {
        d.stats = inner.stats;
        d.stats.kind = "large-pulled";
        d.stats.delta = d.delta;
        d.ok = true;
        return d;
      }
    }
  }
  Decomposition d = SmallSpread(f, p, allowed, budget);
  if (d.ok) d.stats.kind = "large-fallback";
  return d;
}

bool SmallSpreadRegime(const std::vector<std::vector<double>>& dist, const EmulatorParams& p) {
  double dmin = kInf, dmax = 0;
  for (size_t i = 0; i < dist.size(); ++i) {
    for (size_t j = i + 1; j < dist.size(); ++j) {
      if (dist[i][j] > 0) dmin = std::min(dmin, dist[i][j]);
      dmax = std::max(dmax, dist[i][j]);
    }
  }
  if (dmin == kInf) return true;
  const double r = static_cast<double>(dist.size());
  const double lg = std::log2(r);
  double cap = std::min(std::pow(r, 0.9) * lg * lg, p.spread_log2_cap);
  return std::log2(dmax / dmin) <= cap;
}

Decomposition SpreadStep(const Instance& in, const EmulatorParams& p, double allowed,
                         double budget) {
  Fields f(in);
  if (SmallSpreadRegime(f.dist, p)) return SmallSpread(f, p, allowed, budget);
  ClusterHierarchy h = BuildClusterHierarchy(f.dist, in.k(), p);
  return LargeSpread(f, h, p, allowed, budget);
}

}  // namespace

Decomposition SmallSpreadStep(const Instance& in, const std::vector<std::vector<double>>& dist,
                              const EmulatorParams& p, double allowed, double budget) {
  Fields f(in);
  f.dist = dist;
  return SmallSpread(f, p, allowed, budget);
}

Decomposition LargeSpreadStep(const Instance& in, const std::vector<std::vector<double>>& dist,
                              const ClusterHierarchy& h, const EmulatorParams& p,
                              double allowed, double budget) {
  Fields f(in);
  f.dist = dist;
  return LargeSpread(f, h, p, allowed, budget);
}

Decomposition DecomposeStep(const Instance& in, const EmulatorParams& p, double allowed,
                            double budget) {
  const int r = in.k();
  SplitResult cut = RemoveCutVertices(in);
  bool use_cut = !cut.plan.groups.empty() && cut.pieces.size() > 1;
  for (const Instance& pc : cut.pieces)
    for (int h : pc.hole) use_cut = use_cut && h == 0;
  for (auto [piece, ti] : cut.plan.term_src) use_cut = use_cut && piece >= 0;
  if (!use_cut) return SpreadStep(in, p, allowed, budget);

  Decomposition d;
  d.plan = LeafPlan(cut.plan);
  int big = 0;
  for (size_t i = 1; i < cut.pieces.size(); ++i)
    if (cut.pieces[i].k() > cut.pieces[big].k()) big = static_cast<int>(i);
  std::string kind = "cut";
  if (cut.pieces[big].k() > p.piece_frac * r) {
    Decomposition sub = SpreadStep(cut.pieces[big], p, allowed, budget);
    if (!sub.ok) return {};
    kind = "cut+" + sub.stats.kind;
    for (int i = 0; i < static_cast<int>(cut.pieces.size()); ++i) {
      if (i == big) {
        CombineNode n = sub.plan;
        OffsetLeaves(&n, static_cast<int>(d.pieces.size()));
        d.plan.children[i] = std::move(n);
        for (auto& pc : sub.pieces) d.pieces.push_back(std::move(pc));
      } else {
        d.plan.children[i].leaf = static_cast<int>(d.pieces.size());
        d.pieces.push_back(std::move(cut.pieces[i]));
      }
    }
  } else {
    d.pieces = std::move(cut.pieces);
  }
  d.delta = Measure(d.plan, d.pieces, AllTerminalDistances(in.g, in.terms));
  if (d.delta > budget) return {};
  d.stats.kind = kind;
  d.stats.r = r;
  d.stats.delta = d.delta;
  for (const Instance& pc : d.pieces) d.stats.piece_k.push_back(pc.k());
  d.ok = StepContractHolds(r, d.stats.piece_k, p);
  return d;
}

nlohmann::json EmulatorReport::ToJson() const {
  nlohmann::json j;
  j["mode"] = mode;
  j["eps"] = eps;
  j["k"] = k;
  j["input_vertices"] = input_vertices;
  j["output_vertices"] = output_vertices;
  j["output_edges"] = output_edges;
  j["depth"] = depth;
  j["decompose_calls"] = decompose_calls;
  j["base_leaves"] = base_leaves;
  j["fallback_leaves"] = fallback_leaves;
  j["max_distortion"] = max_distortion;
  nlohmann::json st = nlohmann::json::array();
  for (const StepStats& s : steps) {
    st.push_back({{"kind", s.kind},
                  {"r", s.r},
                  {"piece_k", s.piece_k},
                  {"covered", s.covered},
                  {"delta", s.delta}});
  }
  j["steps"] = std::move(st);
  nlohmann::json se = nlohmann::json::array();
  for (auto& [name, e] : stage_eps) se.push_back({{"stage", name}, {"eps", e}});
  j["stage_eps"] = std::move(se);
  j["stage_sizes"] = stage_sizes;
  return j;
}

namespace {

struct Recursion {
  const EmulatorParams& p;
  int lambda;
  EmulatorReport* rep;

  Instance Run(const Instance& in, double budget, int depth) {
    rep->depth = std::max(rep->depth, depth);
    if (in.k() <= lambda || in.k() < 4 || budget <= 0) {
      rep->base_leaves++;
      return BaseZeroEmulator(in);
    }
    int d_est = static_cast<int>(std::ceil(std::log2(static_cast<double>(in.k()) / lambda))) + 1;
    double allowed = budget / d_est;
    rep->decompose_calls++;
    Decomposition dec = DecomposeStep(in, p, allowed, budget);
    if (!dec.ok) {
      rep->fallback_leaves++;
      return BaseZeroEmulator(in);
    }
    rep->steps.push_back(dec.stats);
    std::vector<Instance> kids;
    kids.reserve(dec.pieces.size());
    for (const Instance& pc : dec.pieces) kids.push_back(Run(pc, budget - dec.delta, depth + 1));
    return Combine(dec.plan, kids);
  }
};

}  // namespace

Instance OneHoleEmulator(const Instance& in, const EmulatorParams& p, EmulatorReport* report) {
  for (int h : in.hole) {
    if (h != 0) throw Error(ErrorKind::kBadSpec, "one-hole emulator needs all terminals on hole 0");
  }
  if (in.g.num_edges() > 0) {
    for (int i = 0; i < in.k(); ++i) {
      if (in.tdart[i] < 0 || in.g.face(in.tdart[i]) != in.g.outer_face()) {
        throw Error(ErrorKind::kBadSpec, "terminal not on the outer face");
      }
    }
  }
  EmulatorReport local;
  EmulatorReport* rep = report ? report : &local;
  rep->mode = "onehole";
  rep->eps = p.eps;
  rep->k = in.k();
  rep->input_vertices = in.g.num_vertices();
  Recursion rec{p, p.LambdaStar(in.k()), rep};
  Instance out = rec.Run(in, p.eps, 0);
  double delta = LogDistortion(AllTerminalDistances(out.g, out.terms),
                               AllTerminalDistances(in.g, in.terms));
  rep->max_distortion = delta;
  rep->output_vertices = out.g.num_vertices();
  rep->output_edges = out.g.num_edges();
  if (delta > p.eps * (1 + 1e-9) + 1e-12) {
    throw Error(ErrorKind::kDistortionBudgetExceeded,
                "measured log distortion " + std::to_string(delta) + " above " +
                    std::to_string(p.eps));
  }
  if (!Aligned(out, in)) {
    throw Error(ErrorKind::kDistortionBudgetExceeded, "emulator lost the terminal order");
  }
  return out;
}

}  // namespace emul
