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

#include "emul/harness.hpp"
#include "emul/onehole.hpp"
#include "test_util.hpp"

namespace emul {
namespace {

TEST(Generate, GridCounts) {
  GeneratorSpec s;
  s.m = 3;
  s.k = 4;
  Instance in = Generate(s);
  EXPECT_EQ(in.g.num_vertices(), 9);
  EXPECT_EQ(in.g.num_edges(), 12);
  EXPECT_EQ(in.g.num_vertices() - in.g.num_edges() + in.g.num_faces(), 2);
}

TEST(Generate, AnnulusHasTwoHoles) {
  for (int m : {7, 9, 20}) {
    Instance in = testing::GenGrid(m, 10, "uniform", 1, "holes", "annulus");
    EXPECT_EQ(in.num_holes(), 2) << m;
    auto faces = in.HoleFaces();
    EXPECT_NE(faces[0], faces[1]);
  }
}

TEST(Generate, SpreadStressHasLargeSpread) {
  GeneratorSpec s;
  s.family = "spread-stress";
  s.m = 10;
  s.k = 10;
  s.gap = 1e6;
  s.seed = 2;
  Instance in = Generate(s);
  auto d = ExactOracle(in);
  double lo = kInf, hi = 0;
  for (int i = 0; i < in.k(); ++i)
    for (int j = i + 1; j < in.k(); ++j) lo = std::min(lo, d[i][j]), hi = std::max(hi, d[i][j]);
  EXPECT_GE(hi / lo, 1e6);
}

TEST(Generate, SameSeedSameInstance) {
  for (const char* fam : {"grid", "halved-grid", "annulus", "random-triangulation", "overlay"}) {
    Instance a = testing::GenGrid(fam == std::string("random-triangulation") ? 200 : 12, 10,
                                  "loguniform", 42, "random", fam);
    Instance b = testing::GenGrid(fam == std::string("random-triangulation") ? 200 : 12, 10,
                                  "loguniform", 42, "random", fam);
    EXPECT_EQ(DumpCanonical(InstanceToJson(a)), DumpCanonical(InstanceToJson(b))) << fam;
  }
}

TEST(Generate, BadSpec) {
  GeneratorSpec s;
  s.family = "torus";
  EXPECT_THROW(Generate(s), Error);
}

TEST(InstanceJson, RoundTrip) {
  Instance in = testing::GenGrid(12, 16, "uniform", 3, "holes", "annulus");
  Instance back = InstanceFromJson(InstanceToJson(in));
  EXPECT_TRUE(Aligned(in, back));
  EXPECT_EQ(DumpCanonical(InstanceToJson(in)), DumpCanonical(InstanceToJson(back)));
}

TEST(ExactOracle, SingleEdge) {
  PlaneGraph g = PlaneGraph::FromCoordinates({{0, 0}, {1, 0}}, {{0, 1, 7}});
  Instance in = MakeGeneral(g, {0, 1});
  EXPECT_EQ(ExactOracle(in), (std::vector<std::vector<double>>{{0, 7}, {7, 0}}));
}

TEST(ExactOracle, UnitCycle) {
  Instance in = MakeOneHole(testing::Cycle(6), {0, 1, 2, 3, 4, 5});
  auto d = ExactOracle(in);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      EXPECT_DOUBLE_EQ(d[i][j], std::min(std::abs(i - j), 6 - std::abs(i - j)));
}

TEST(VerifyEmulator, IdentityPassesEveryEps) {
  Instance in = testing::GenGrid(8, 8, "uniform", 1);
  for (double eps : {0.0, 0.01, 0.5}) {
    auto v = VerifyEmulator(in, in, eps);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.max_log, 0);
    EXPECT_EQ(v.pairs, 28);
  }
}

TEST(VerifyEmulator, DoubledBridgeFailsBelowLn2) {
  // Two triangles joined by a bridge of weight 1; the emulator doubles it.
  auto make = [](double bridge) {
    PlaneGraph g = PlaneGraph::FromCoordinates(
        {{0, 0}, {-1, 1}, {-1, -1}, {2, 0}, {3, 1}, {3, -1}},
        {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 3, bridge}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}});
    return MakeOneHole(g, {0, 3});
  };
  Instance in = make(1), em = make(2);
  EXPECT_FALSE(VerifyEmulator(in, em, std::log(2.0) - 1e-3).pass);
  EXPECT_TRUE(VerifyEmulator(in, em, std::log(2.0)).pass);
}

TEST(VerifyEmulator, TerminalMismatch) {
  Instance a = testing::GenGrid(8, 8, "uniform", 1);
  Instance b = testing::GenGrid(8, 6, "uniform", 1);
  try {
    VerifyEmulator(a, b, 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTerminalMismatch);
  }
}

}  // namespace
}  // namespace emul
