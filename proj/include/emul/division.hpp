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

// Cycle separators and r-divisions with few holes.

#pragma once

#include <vector>

#include "json.hpp"

#include "emul/instance.hpp"
#include "emul/onehole.hpp"

namespace emul {

struct Separator {
  std::vector<int> cycle;  // vertices of the separating cycle, in order
  double total = 0;
  double inside = 0;
  double outside = 0;
  double on_cycle = 0;
  // max(inside, outside) / total, 0 when the total is 0.
  double balance() const;
};

// Fundamental-cycle separator. Faces of more than three sides get a
// virtual vertex joined to all their corners; a BFS tree is grown from a
// central vertex, and among the fundamental cycles the shortest one whose
// sides both weigh at most 3/4 of the total is returned (the most balanced
// one if none is). Virtual vertices never appear in the result.
Separator BalancedSeparator(const PlaneGraph& g, const std::vector<double>& weight);

struct DivisionParams {
  int h_max = 6;
  double c_div = 8.0;
  // Rounds a piece of at most r vertices may still be cut to meet the
  // boundary, hole and terminal bounds.
  int extra_rounds = 4;
};

struct RPiece {
  std::vector<int> edges;     // parent edge ids, sorted
  std::vector<int> vertices;  // parent vertex ids, sorted
  std::vector<int> boundary;  // vertices shared with another piece
  std::vector<int> terminals; // parent terminal indices at vertices of the piece
  int holes = 0;              // faces of the piece that carry boundary vertices
};

struct RDivision {
  int r = 0;
  int n = 0;
  int k = 0;
  std::vector<RPiece> pieces;
  std::vector<int> piece_of_edge;

  nlohmann::json ToJson() const;
};

// Recursive separator division. The weight balanced at recursion level l
// cycles through vertices, boundary vertices, holes (each hole's boundary
// vertices share one unit) and terminals by l mod 4; a piece with more
// than h_max holes gets a hole round regardless. Throws RTooSmall if r < 16.
RDivision RDivide(const Instance& in, int r, const DivisionParams& p = {});

// The division as a split: boundary vertices are cut between consecutive
// darts of different pieces, so every piece becomes a plane instance whose
// terminals are its boundary copies and its own terminals.
SplitResult DivisionSplit(const Instance& in, const RDivision& div);

}  // namespace emul
