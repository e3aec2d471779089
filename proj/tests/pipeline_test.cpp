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
#include <random>

#include "emul/harness.hpp"
#include "emul/pipeline.hpp"
#include "test_util.hpp"

namespace emul {
namespace {

double StageSum(const EmulatorReport& rep) {
  double s = 0;
  for (const auto& [name, e] : rep.stage_eps) s += e;
  return s;
}

TEST(SizeReduction, SinglePieceMatchesMultiHole) {
  Instance in = testing::GenGrid(6, 10, "uniform", 1);
  PipelineConfig cfg;
  Instance a = SizeReductionAt(in, 64, 0.25, cfg);
  EmulatorParams p = cfg.emulator;
  p.eps = 0.25;
  Instance b = MultiHoleEmulator(in, p);
  Instance c = BaseZeroEmulator(in);
  EXPECT_EQ(a.g.num_vertices(), std::min(b.g.num_vertices(), c.g.num_vertices()));
  EXPECT_TRUE(VerifyEmulator(in, a, 0.25).pass);
}

TEST(SizeReduction, GridShrinksWithinEps) {
  Instance in = testing::GenGrid(32, 16, "uniform", 2, "random");
  EmulatorReport rep;
  Instance out = SizeReduction(in, 0.5, {}, &rep);
  EXPECT_LT(out.g.num_vertices(), in.g.num_vertices());
  auto v = VerifyEmulator(in, out, 0.5);
  EXPECT_TRUE(v.pass) << v.max_log;
}

TEST(PlanarEmulator, GridRandomTerminals) {
  Instance in = testing::GenGrid(64, 64, "unit", 3, "random");
  EmulatorReport rep;
  Instance out = PlanarEmulator(in, 0.25, {}, &rep);
  EXPECT_LT(out.g.num_vertices(), in.g.num_vertices() / 4);
  auto v = VerifyEmulator(in, out, 0.25);
  EXPECT_TRUE(v.pass) << v.max_log;
  EXPECT_LE(StageSum(rep), 0.25 + 1e-12);
  // Sizes never grow once the first pass is done.
  for (size_t i = 2; i < rep.stage_sizes.size(); ++i)
    EXPECT_LE(rep.stage_sizes[i], rep.stage_sizes[i - 1]);
}

TEST(PlanarEmulator, AllVerticesTerminals) {
  GeneratorSpec s;
  s.family = "grid";
  s.m = 10;
  s.k = 100;
  s.placement = "random";
  s.weights = "uniform";
  Instance in = Generate(s);
  Instance out = PlanarEmulator(in, 0.25);
  EXPECT_LE(out.g.num_vertices(), 4 * in.g.num_vertices());
  EXPECT_TRUE(VerifyEmulator(in, out, 0.25).pass);
}

TEST(BootstrapEmulator, NoLargerThanTwicePlanar) {
  Instance in = testing::GenGrid(128, 16, "unit", 1, "random");
  EmulatorReport rb;
  Instance b = BootstrapEmulator(in, 0.5, {}, &rb);
  Instance p = PlanarEmulator(in, 0.5);
  EXPECT_LE(b.g.num_vertices(), 2 * p.g.num_vertices());
  auto v = VerifyEmulator(in, b, 0.5);
  EXPECT_TRUE(v.pass) << v.max_log;
  EXPECT_LE(StageSum(rb), 0.5 + 1e-12);
  EXPECT_LE(rb.max_distortion, 0.5);
}

TEST(BootstrapEmulator, RejectsTooManyTerminals) {
  Instance in = testing::GenGrid(16, 40, "unit", 1, "random");
  try {
    BootstrapEmulator(in, 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPreconditionKTooLarge);
  }
}

TEST(BootstrapSchedule, IncreasingAndClamped) {
  for (int n : {100, 10000, 1000000}) {
    auto rs = BootstrapSchedule(n, 2);
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_GE(rs[0], 16);
    EXPECT_LT(rs[0], rs[1]);
    EXPECT_LT(rs[1], rs[2]);
  }
  // n = 2^16: log n = 16, so the last stage is 16^2 = 256.
  EXPECT_EQ(BootstrapSchedule(1 << 16, 2).back(), 256);
}

TEST(Emulate, UnknownModeIsBadSpec) {
  Instance in = testing::GenGrid(6, 4, "unit", 1);
  try {
    Emulate(in, "nope", 0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBadSpec);
  }
}

TEST(Emulate, Deterministic) {
  Instance in = testing::GenGrid(24, 24, "uniform", 8, "random");
  for (const char* mode : {"general", "bootstrap"}) {
    if (std::string(mode) == "bootstrap") in = testing::GenGrid(40, 8, "uniform", 8, "random");
    std::string a = DumpCanonical(InstanceToJson(Emulate(in, mode, 0.25)));
    std::string b = DumpCanonical(InstanceToJson(Emulate(in, mode, 0.25)));
    EXPECT_EQ(a, b) << mode;
  }
}

TEST(DistanceOracle, QueriesWithinBound) {
  Instance in = testing::GenGrid(64, 64, "uniform", 4);
  DistanceOracle o = DistanceOracle::Build(in, 0.25);
  auto exact = ExactOracle(in);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(0, in.k() - 1);
  for (int q = 0; q < 100; ++q) {
    int a = pick(rng), b = pick(rng);
    double got = o.Query(a, b);
    if (a == b) {
      EXPECT_EQ(got, 0);
      continue;
    }
    EXPECT_LE(testing::LogRatio(got, exact[a][b]), 0.25 * (1 + 1e-9));
  }
  for (int t = 0; t < in.k(); ++t) EXPECT_EQ(o.Query(t, t), 0);
}

TEST(DistanceOracle, ExactWithFewTerminals) {
  Instance in = testing::GenGrid(12, 10, "uniform", 5);
  DistanceOracle o = DistanceOracle::Build(in, 0.25);
  auto exact = ExactOracle(in);
  for (int a = 0; a < in.k(); ++a)
    for (int b = 0; b < in.k(); ++b) EXPECT_NEAR(o.Query(a, b), exact[a][b], 1e-9 * exact[a][b]);
}

TEST(DistanceOracle, UnknownTerminal) {
  Instance in = testing::GenGrid(8, 6, "unit", 1);
  DistanceOracle o = DistanceOracle::Build(in, 0.25);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{-1, 0}, {0, 6}, {7, 7}}) {
    try {
      o.Query(a, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUnknownTerminal);
    }
  }
}

}  // namespace
}  // namespace emul
