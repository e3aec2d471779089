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

// Instance generators, the reference distance oracle, and verification.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "emul/instance.hpp"

namespace emul {

struct GeneratorSpec {
  // grid, halved-grid, annulus, random-triangulation, overlay, spread-stress
  std::string family = "grid";
  int m = 8;   // side length; vertex count for random-triangulation
  int k = 8;   // terminals
  std::string weights = "unit";  // unit, uniform, loguniform
  // boundary (one hole on the outer face), holes (annulus only: outer and
  // inner boundary), random (anywhere).
  std::string placement = "boundary";
  double gap = 1e6;  // spread-stress: weight of the edges between the halves
  uint64_t seed = 1;
};

Instance Generate(const GeneratorSpec& spec);

// Terminal distances by a separate binary-heap Dijkstra over an edge list.
std::vector<std::vector<double>> ExactOracle(const Instance& in);

struct VerificationReport {
  bool pass = true;
  double eps = 0;
  double max_log = 0;   // worst |log(emulator / original)|
  double mean_log = 0;
  int worst_i = -1;
  int worst_j = -1;
  int pairs = 0;
  int original_vertices = 0;
  int emulator_vertices = 0;
  int emulator_edges = 0;

  nlohmann::json ToJson() const;
};

// All pairs, with 1e-9 relative slack on both bounds. Throws
// TerminalMismatch when the terminal counts differ.
VerificationReport VerifyEmulator(const Instance& original, const Instance& emulator, double eps,
                                  const std::vector<std::vector<double>>* original_dist = nullptr);

}  // namespace emul
