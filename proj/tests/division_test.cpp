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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "emul/division.hpp"
#include "emul/harness.hpp"
#include "test_util.hpp"

namespace emul {
namespace {

PlaneGraph Star(int leaves) {
  std::vector<std::pair<double, double>> xy = {{0, 0}};
  std::vector<Edge> edges;
  for (int i = 0; i < leaves; ++i) {
    double a = 2 * M_PI * i / leaves;
    xy.emplace_back(std::cos(a), std::sin(a));
    edges.push_back({0, i + 1, 1});
  }
  return PlaneGraph::FromCoordinates(xy, edges);
}

// Side of every vertex relative to the cycle, checked by removing the
// cycle and looking at connected components.
void CheckSeparates(const PlaneGraph& g, const Separator& s, const std::vector<double>& w) {
  std::set<int> cyc(s.cycle.begin(), s.cycle.end());
  std::vector<int> comp(g.num_vertices(), -1);
  std::vector<double> cw;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (cyc.count(v) || comp[v] >= 0) continue;
    int c = static_cast<int>(cw.size());
    cw.push_back(0);
    std::vector<int> stack{v};
    comp[v] = c;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      cw[c] += w[x];
      for (int d : g.rotation(x)) {
        int y = g.head(d);
        if (!cyc.count(y) && comp[y] < 0) comp[y] = c, stack.push_back(y);
      }
    }
  }
  // Each component lies on one side, so none may exceed the heavier side.
  for (double x : cw) EXPECT_LE(x, std::max(s.inside, s.outside) + 1e-9);
  EXPECT_NEAR(s.inside + s.outside + s.on_cycle, s.total, 1e-9);
}

TEST(BalancedSeparator, StarCentre) {
  PlaneGraph g = Star(10);
  std::vector<double> w(g.num_vertices(), 1);
  Separator s = BalancedSeparator(g, w);
  EXPECT_TRUE(std::find(s.cycle.begin(), s.cycle.end(), 0) != s.cycle.end());
  EXPECT_LE(s.balance(), 0.75);
  CheckSeparates(g, s, w);
}

TEST(BalancedSeparator, GridIsShortAndBalanced) {
  for (int m : {8, 16, 32}) {
    PlaneGraph g = testing::Grid(m);
    std::vector<double> w(g.num_vertices(), 1);
    Separator s = BalancedSeparator(g, w);
    EXPECT_LE(s.balance(), 0.75) << m;
    EXPECT_LE(static_cast<double>(s.cycle.size()), 4.0 * m) << m;
    CheckSeparates(g, s, w);
  }
}

TEST(BalancedSeparator, ConcentratedWeight) {
  PlaneGraph g = testing::Grid(9);
  std::vector<double> w(g.num_vertices(), 0);
  w[40] = 1;
  Separator s = BalancedSeparator(g, w);
  EXPECT_LE(std::max(s.inside, s.outside), 0.75 * s.total);
  CheckSeparates(g, s, w);
}

TEST(RDivide, Grid16) {
  Instance in = testing::GenGrid(16, 16, "unit", 1);
  RDivision div = RDivide(in, 64);
  DivisionParams p;
  EXPECT_LE(div.pieces.size(), p.c_div * 4 * 4);
  for (const RPiece& pc : div.pieces) {
    EXPECT_LE(static_cast<int>(pc.vertices.size()), 64);
    EXPECT_LE(static_cast<double>(pc.boundary.size()), p.c_div * 8);
    EXPECT_LE(pc.holes, p.h_max);
  }
}

TEST(RDivide, SmallInstanceIsOnePiece) {
  Instance in = testing::GenGrid(6, 8, "unit", 1);
  RDivision div = RDivide(in, 64);
  ASSERT_EQ(div.pieces.size(), 1u);
  EXPECT_TRUE(div.pieces[0].boundary.empty());
  EXPECT_EQ(static_cast<int>(div.pieces[0].edges.size()), in.g.num_edges());
}

TEST(RDivide, RejectsSmallR) {
  Instance in = testing::GenGrid(6, 8, "unit", 1);
  try {
    RDivide(in, 15);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRTooSmall);
  }
}

TEST(RDivide, EveryEdgeInExactlyOnePiece) {
  Instance in = testing::GenGrid(500, 40, "uniform", 2, "random", "random-triangulation");
  RDivision div = RDivide(in, 50);
  std::vector<int> cnt(in.g.num_edges(), 0);
  for (size_t i = 0; i < div.pieces.size(); ++i)
    for (int e : div.pieces[i].edges) {
      ++cnt[e];
      EXPECT_EQ(div.piece_of_edge[e], static_cast<int>(i));
    }
  for (int c : cnt) EXPECT_EQ(c, 1);
  // A boundary vertex is exactly one in more than one piece.
  std::vector<int> owners(in.g.num_vertices(), 0);
  for (const auto& pc : div.pieces)
    for (int v : pc.vertices) ++owners[v];
  for (const auto& pc : div.pieces)
    for (int v : pc.vertices)
      EXPECT_EQ(owners[v] > 1, std::binary_search(pc.boundary.begin(), pc.boundary.end(), v));
}

TEST(RDivide, AllVerticesTerminals) {
  GeneratorSpec s;
  s.family = "grid";
  s.m = 16;
  s.k = 256;
  s.placement = "random";
  Instance in = Generate(s);
  const int r = 64;
  RDivision div = RDivide(in, r);
  DivisionParams p;
  for (const auto& pc : div.pieces) {
    EXPECT_LE(static_cast<double>(pc.terminals.size()),
              p.c_div * (1.0 + static_cast<double>(in.k()) * r / in.g.num_vertices()));
  }
}

TEST(RDivide, ContractOnLargerInputs) {
  DivisionParams p;
  struct Case {
    const char* fam;
    int m;
    int r;
  };
  for (Case c : {Case{"grid", 48, 64}, Case{"random-triangulation", 3000, 100},
                 Case{"annulus", 40, 64}}) {
    Instance in = testing::GenGrid(c.m, 48, "uniform", 3, "random", c.fam);
    RDivision div = RDivide(in, c.r);
    const double tbound = p.c_div * (1.0 + static_cast<double>(in.k()) * c.r / in.g.num_vertices());
    for (const auto& pc : div.pieces) {
      EXPECT_LE(static_cast<int>(pc.vertices.size()), c.r) << c.fam;
      EXPECT_LE(static_cast<double>(pc.boundary.size()), p.c_div * std::sqrt(c.r)) << c.fam;
      EXPECT_LE(pc.holes, p.h_max) << c.fam;
      EXPECT_LE(static_cast<double>(pc.terminals.size()), tbound) << c.fam;
    }
  }
}

TEST(DivisionSplit, PieceDistancesDominateAndGlueIsExact) {
  Instance in = testing::GenGrid(24, 24, "uniform", 6, "random");
  RDivision div = RDivide(in, 64);
  SplitResult sr = DivisionSplit(in, div);
  // A piece meeting a vertex in two separate angles falls apart there, so
  // there can be more split pieces than division pieces; each still comes
  // from one division piece.
  ASSERT_GE(sr.pieces.size(), div.pieces.size());
  for (size_t i = 0; i < sr.pieces.size(); ++i) {
    std::set<int> from;
    for (int d : sr.dorig[i]) from.insert(div.piece_of_edge[d >> 1]);
    EXPECT_EQ(from.size(), 1u);
  }
  // Distances inside a piece are at least the global ones.
  std::vector<int> all(in.g.num_vertices());
  for (int v = 0; v < in.g.num_vertices(); ++v) all[v] = v;
  auto global = AllTerminalDistances(in.g, all);
  for (size_t i = 0; i < sr.pieces.size(); ++i) {
    const Instance& pc = sr.pieces[i];
    auto d = AllTerminalDistances(pc.g, pc.terms);
    for (int a = 0; a < pc.k(); ++a)
      for (int b = 0; b < pc.k(); ++b) {
        int u = sr.term_vertex[i][a], v = sr.term_vertex[i][b];
        EXPECT_GE(d[a][b], global[u][v] - 1e-9);
      }
  }
  Instance glued = Glue(sr.plan, sr.pieces);
  auto a = ExactOracle(in), b = ExactOracle(glued);
  for (int i = 0; i < in.k(); ++i)
    for (int j = 0; j < in.k(); ++j) EXPECT_NEAR(a[i][j], b[i][j], 1e-9 * a[i][j]);
}

}  // namespace
}  // namespace emul
