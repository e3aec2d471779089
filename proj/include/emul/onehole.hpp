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

// One-hole emulators by recursive split and combine.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "emul/graph.hpp"
#include "emul/instance.hpp"

namespace emul {

struct EmulatorParams {
  double eps = 0.25;
  // lambda* = max(lambda_min, lambda_c * log^2 k / eps^lambda_p).
  int lambda_min = 32;
  double lambda_c = 8.0;
  double lambda_p = 2.0;
  // Spread above 2^spread_log2_cap goes to the large-spread branch.
  double spread_log2_cap = 16.0;
  // Large spread: mu = r^mu_exp, eps'_r = r^-eps_prime_exp.
  double mu_exp = 2.0;
  double eps_prime_exp = 0.7;
  // Contract every decomposition step must meet: pieces of at most
  // piece_frac * r terminals, at most sum_c * r in total, and at most
  // r * (1 + sum_c / lambda) in pieces above lambda = floor(log2(r)^2).
  double piece_frac = 0.9;
  double sum_c = 8.0;
  // Branch vertices per path set are asserted to be <= branch_c * |U|.
  double branch_c = 8.0;

  int LambdaStar(int k) const;
  // Settings used at desk scale: lambda* = 32 regardless of k.
  static EmulatorParams Desk(double eps);
};

struct PathSet {
  std::vector<std::pair<int, int>> pairs;  // terminal indices
  std::vector<Path> paths;
  std::vector<int> portals;  // Y, vertex ids
  std::vector<int> branch;   // Y*, vertex ids
};

// How pieces of a split are put back together.
struct SplitPlan {
  struct Group {
    int vertex = -1;  // parent vertex
    // One entry per run, counter-clockwise: (piece, piece terminal) or
    // (-1, -1) for a run whose piece was dropped.
    std::vector<std::pair<int, int>> runs;
  };
  int num_pieces = 0;
  std::vector<Group> groups;
  // Parent terminal -> (piece, piece terminal).
  std::vector<std::pair<int, int>> term_src;
  std::vector<int> parent_hole;
  std::vector<int> piece_k;
};

struct SplitResult {
  std::vector<Instance> pieces;
  SplitPlan plan;
  // Per piece: vertex and dart provenance in the parent, and for each piece
  // terminal the parent terminal it continues (-1 for a portal copy).
  std::vector<std::vector<int>> vorig;
  std::vector<std::vector<int>> dorig;
  std::vector<std::vector<int>> term_parent;
  std::vector<std::vector<int>> term_vertex;  // parent vertex per piece terminal
};

// Slices along spec and keeps every component with at least two
// terminals. Terminals of a piece are its original terminals plus one
// copy per run of an identified vertex. Identified terminals are always
// cut at their own corner.
SplitResult SplitInstance(const Instance& in, SliceSpec spec);

// Split of a one-hole instance along a path set: identified vertices are
// the portals and the terminals on the paths, cut at their outer corners.
SplitResult Split(const Instance& in, const PathSet& ps);

// Identifies the copies of every group. children[i] must be aligned with
// piece i.
Instance Glue(const SplitPlan& plan, const std::vector<Instance>& children);

// Recipe for reassembling a decomposition from emulators of its pieces.
struct CombineNode {
  enum class Kind { kLeaf, kSplit, kPull };
  Kind kind = Kind::kLeaf;
  int leaf = -1;
  SplitPlan plan;
  std::vector<CombineNode> children;
  // kPull: terminal i of the child stands for terminal i of the parent;
  // pulled terminals gained a pendant edge of this weight.
  double pull_weight = 0;
  int pulled = 0;
};
Instance Combine(const CombineNode& node, const std::vector<Instance>& leaves);

// Terminal pulling: each terminal with pull[i] moves to a new pendant
// vertex joined by an edge of weight w placed in its outer corner.
Instance PullTerminals(const Instance& in, const std::vector<char>& pull, double w);

SplitResult RemoveCutVertices(const Instance& in);

// Exact emulator: union of the tie-broken terminal shortest paths,
// reduced by pruning, degree-2 suppression and parallel-edge removal.
Instance BaseZeroEmulator(const Instance& in);

// Shortest paths for non-crossing terminal pairs by divide and conquer
// over the outerplanar pair graph. Throws CrossingPairs.
PathSet NoncrossingShortestPaths(const Instance& in,
                                 const std::vector<std::pair<int, int>>& pairs);

// Greedy eps-cover of v on shortest path p; vertices in path order.
// The greedy walks outward from the closest path vertex and adds a vertex
// whenever no chosen vertex gives a (1 + eps) detour to it.
std::vector<int> EpsCover(const PlaneGraph& g, const Path& p, int v, double eps);
std::vector<int> EpsCoverFromDistances(const std::vector<int>& pverts,
                                       const std::vector<double>& prefix,
                                       const std::vector<double>& dv, double eps);
// Adds to chosen (flags over the path vertices) until it is an eps-cover
// for the vertex with path distances dv.
void ExtendCover(const std::vector<double>& prefix, const std::vector<double>& dv, double eps,
                 std::vector<char>* chosen);
// Cover valid for every vertex of ys at once, grown vertex by vertex.
std::vector<int> EpsCoverUnion(const PlaneGraph& g, const Path& p, const std::vector<int>& ys,
                               double eps);
// Portals at the marks unit * e^(i eps_r), i = 1..marks, measured along p
// from either end: the nearest path vertices on both sides of each mark,
// plus both endpoints. Vertices in path order.
std::vector<int> ExponentialPortals(const PlaneGraph& g, const Path& p, double eps_r, int marks,
                                   double unit = 1.0);
// Brute-force check of the cover predicate.
bool CoverValid(const PlaneGraph& g, const Path& p, int v, const std::vector<int>& cover,
                double eps, double slack = 1e-9);

// Vertices of degree >= 3 in the union of the paths, sorted.
std::vector<int> BranchVertices(const PlaneGraph& g, const std::vector<Path>& paths);

struct ClusterHierarchy {
  struct Cluster {
    std::vector<int> members;  // terminal indices, sorted
    int level = 0;
    int parent = -1;           // cluster id on level + 1
    bool expanding = false;
  };
  double mu = 0;
  double eps_prime = 0;
  double scale = 1;  // minimum terminal distance used for normalisation
  int L = 0;
  std::vector<Cluster> clusters;
  std::vector<std::vector<int>> levels;  // cluster ids per level
};
ClusterHierarchy BuildClusterHierarchy(const std::vector<std::vector<double>>& dist, int r,
                                       const EmulatorParams& p);

struct StepStats {
  std::string kind;
  int r = 0;
  std::vector<int> piece_k;
  bool covered = true;
  double delta = 0;
};

bool StepContractHolds(int r, const std::vector<int>& piece_k, const EmulatorParams& p);

struct Decomposition {
  bool ok = false;
  std::vector<Instance> pieces;
  CombineNode plan;
  double delta = 0;  // measured log distortion of Combine(plan, pieces)
  StepStats stats;
};

// Worst |log ratio| between two terminal distance matrices.
double LogDistortion(const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b);

Decomposition SmallSpreadStep(const Instance& in, const std::vector<std::vector<double>>& dist,
                              const EmulatorParams& p, double allowed, double budget);
Decomposition LargeSpreadStep(const Instance& in, const std::vector<std::vector<double>>& dist,
                              const ClusterHierarchy& h, const EmulatorParams& p,
                              double allowed, double budget);
// Cut-vertex removal followed by the spread case. allowed is the target
// distortion of the step and budget the hard limit.
Decomposition DecomposeStep(const Instance& in, const EmulatorParams& p, double allowed,
                            double budget);

struct EmulatorReport {
  std::string mode;
  double eps = 0;
  int k = 0;
  int input_vertices = 0;
  int output_vertices = 0;
  int output_edges = 0;
  int depth = 0;
  int decompose_calls = 0;
  int base_leaves = 0;
  int fallback_leaves = 0;
  double max_distortion = 0;
  std::vector<StepStats> steps;
  std::vector<std::pair<std::string, double>> stage_eps;
  std::vector<int> stage_sizes;

  nlohmann::json ToJson() const;
};

Instance OneHoleEmulator(const Instance& in, const EmulatorParams& p,
                         EmulatorReport* report = nullptr);

}  // namespace emul
