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

#include "emul/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace emul {

namespace {

void Audit(const Instance& in, const Instance& out, double eps, EmulatorReport* report) {
  const double delta = LogDistortion(AllTerminalDistances(in.g, in.terms),
                                     AllTerminalDistances(out.g, out.terms));
  if (delta > eps * (1 + 1e-9) + 1e-12) {
    throw Error(ErrorKind::kDistortionBudgetExceeded,
                "measured " + std::to_string(delta) + " > " + std::to_string(eps));
  }
  if (report) {
    report->max_distortion = delta;
    report->output_vertices = out.g.num_vertices();
    report->output_edges = out.g.num_edges();
  }
}

void Begin(EmulatorReport* report, const char* mode, const Instance& in, double eps) {
  if (!report) return;
  report->mode = mode;
  report->eps = eps;
  report->k = in.k();
  report->input_vertices = in.g.num_vertices();
}

void Absorb(EmulatorReport* report, const EmulatorReport& sub) {
  if (!report) return;
  report->depth = std::max(report->depth, sub.depth);
  report->decompose_calls += sub.decompose_calls;
  report->base_leaves += sub.base_leaves;
  report->fallback_leaves += sub.fallback_leaves;
  for (const auto& st : sub.steps) report->steps.push_back(st);
}

// The union of the terminal shortest paths, if smaller; it is exact and
// costs no budget.
Instance ExactReduce(const Instance& in, EmulatorReport* report) {
  Instance exact = BaseZeroEmulator(in);
  if (exact.g.num_vertices() >= in.g.num_vertices()) return in;
  if (report) {
    report->stage_eps.emplace_back("exact", 0.0);
    report->stage_sizes.push_back(exact.g.num_vertices());
  }
  return exact;
}

}  // namespace

Instance SizeReductionAt(const Instance& in, int r, double eps, const PipelineConfig& cfg,
                         EmulatorReport* report) {
  RDivision div = RDivide(in, r, cfg.division);
  SplitResult sr = DivisionSplit(in, div);
  std::vector<Instance> ems;
  EmulatorParams q = cfg.emulator;
  q.eps = eps;
  for (const Instance& piece : sr.pieces) {
    EmulatorReport sub;
    Instance best = BaseZeroEmulator(piece);
    if (best.g.num_vertices() > piece.g.num_vertices()) best = piece;
    Instance em = MultiHoleEmulator(piece, q, &sub);
    Absorb(report, sub);
    if (em.g.num_vertices() < best.g.num_vertices()) best = std::move(em);
    ems.push_back(std::move(best));
  }
  Instance out = Glue(sr.plan, ems);
  if (report) {
    report->stage_eps.emplace_back("size-reduction r=" + std::to_string(r), eps);
    report->stage_sizes.push_back(out.g.num_vertices());
  }
  return out;
}

Instance SizeReduction(const Instance& in, double eps, const PipelineConfig& cfg,
                       EmulatorReport* report) {
  const int r = std::max(16, in.g.num_vertices() / std::max(1, in.k()));
  Begin(report, "size-reduction", in, eps);
  Instance out = SizeReductionAt(in, r, eps, cfg, report);
  Audit(in, out, eps, report);
  return out;
}

Instance PlanarEmulator(const Instance& in, double eps, const PipelineConfig& cfg,
                        EmulatorReport* report) {
  Begin(report, "general", in, eps);
  const int n = in.g.num_vertices();
  const int k = std::max(2, in.k());
  const int L = cfg.iterations > 0
                    ? cfg.iterations
                    : std::max(1, static_cast<int>(std::ceil(std::log2(std::log2(k)) - 1e-12)));
  const double step = eps / (2 * L);
  Instance cur = ExactReduce(in, report);
  if (static_cast<double>(n) >= static_cast<double>(k) * k) {
    cur = SizeReductionAt(cur, std::max(16, n / k), eps / 2, cfg, report);
  } else if (report) {
    report->stage_eps.emplace_back("preprocessing skipped", 0.0);
  }
  for (int i = 0; i < L; ++i) {
    const int ni = cur.g.num_vertices();
    Instance next = SizeReductionAt(cur, std::max(16, ni / k), step, cfg, report);
    if (next.g.num_vertices() >= ni) break;
    cur = std::move(next);
  }
  cur = ExactReduce(cur, report);
  Audit(in, cur, eps, report);
  return cur;
}

std::vector<int> BootstrapSchedule(int n, double a) {
  double l = std::log2(std::max(4, n));
  std::vector<double> base = {std::log2(std::log2(std::max(2.0, l))), std::log2(l), l};
  std::vector<int> rs;
  for (double b : base) {
    int r = std::max(16, static_cast<int>(std::ceil(std::pow(std::max(1.0, b), a))));
    if (!rs.empty()) r = std::max(r, rs.back() + 1);
    rs.push_back(r);
  }
  return rs;
}

Instance BootstrapEmulator(const Instance& in, double eps, const PipelineConfig& cfg,
                           EmulatorReport* report) {
  const int n = in.g.num_vertices();
  const double cap = n / std::pow(std::log2(std::max(2, n)), cfg.bootstrap_d);
  if (in.k() > cap) {
    throw Error(ErrorKind::kPreconditionKTooLarge,
                "k = " + std::to_string(in.k()) + " > " + std::to_string(cap));
  }
  Begin(report, "bootstrap", in, eps);
  const double stage = eps / 4;
  // Rounding to the nearest power of b moves each weight by at most a
  // factor sqrt(b) in log terms.
  const double base = 1 + eps / 8;
  const double rounding = std::log(base) / 2;
  std::vector<Edge> edges = in.g.edges();
  for (Edge& e : edges) {
    if (e.w > 0) e.w = std::pow(base, std::round(std::log(e.w) / std::log(base)));
  }
  std::vector<std::vector<int>> rot(n);
  for (int v = 0; v < n; ++v) rot[v] = in.g.rotation(v);
  Instance cur = in;
  cur.g = PlaneGraph::Build(n, std::move(edges), std::move(rot), in.g.outer_dart(), false);
  if (report) report->stage_eps.emplace_back("rounding", rounding);
  cur = ExactReduce(cur, report);

  for (int r : BootstrapSchedule(n, cfg.bootstrap_a)) {
    if (cur.g.num_vertices() <= r) continue;
    cur = SizeReductionAt(cur, r, stage, cfg, report);
  }
  const int r = std::max(16, cur.g.num_vertices() / std::max(1, cur.k()));
  cur = SizeReductionAt(cur, r, std::max(0.0, stage - rounding), cfg, report);
  cur = ExactReduce(cur, report);
  Audit(in, cur, eps, report);
  return cur;
}

Instance Emulate(const Instance& in, const std::string& mode, double eps,
                 const PipelineConfig& cfg, EmulatorReport* report) {
  EmulatorParams p = cfg.emulator;
  p.eps = eps;
  if (mode == "onehole") return OneHoleEmulator(in, p, report);
  if (mode == "multihole") return MultiHoleEmulator(in, p, report);
  if (mode == "general") return PlanarEmulator(in, eps, cfg, report);
  if (mode == "bootstrap") return BootstrapEmulator(in, eps, cfg, report);
  throw Error(ErrorKind::kBadSpec, "unknown mode " + mode);
}

DistanceOracle DistanceOracle::Build(const Instance& in, double eps, const std::string& mode,
                                     const PipelineConfig& cfg) {
  DistanceOracle o;
  o.emulator_ = Emulate(in, mode, eps, cfg);
  o.table_ = AllTerminalDistances(o.emulator_.g, o.emulator_.terms);
  return o;
}

double DistanceOracle::Query(int t, int u) const {
  if (t < 0 || u < 0 || t >= k() || u >= k()) {
    throw Error(ErrorKind::kUnknownTerminal,
                "terminal " + std::to_string(t < 0 || t >= k() ? t : u));
  }
  return table_[t][u];
}

}  // namespace emul
