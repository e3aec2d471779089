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

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "emul/graph.hpp"

namespace emul {

// A plane graph with terminals. Terminal i sits at vertex terms[i], in
// the corner just before dart tdart[i] (so on face(tdart[i])), and belongs
// to hole hole[i]; hole -1 means the terminal is not tied to a face.
// Terminals of a hole are listed in their circular order on that face.
struct Instance {
  PlaneGraph g;
  std::vector<int> terms;
  std::vector<int> tdart;
  std::vector<int> hole;

  int k() const { return static_cast<int>(terms.size()); }
  int num_holes() const;
  // Face of each hole, -1 if the hole has no terminal with a dart.
  std::vector<int> HoleFaces() const;
  // Terminal indices of hole h in circular order on its face, starting
  // from the lowest walk position.
  std::vector<int> CircularOrder(int h) const;
};

// All terminals on the outer face, ordered along the outer walk.
Instance MakeOneHole(PlaneGraph g, const std::vector<int>& terminal_vertices);
// Terminals anywhere; each takes the corner before its first dart.
Instance MakeGeneral(PlaneGraph g, const std::vector<int>& terminal_vertices);
// One list of vertices per hole; each list must share a face.
Instance MakeHoles(PlaneGraph g, const std::vector<std::vector<int>>& holes);

// Redesignates the outer face as the face of hole 0 (one-hole view of a
// single-hole instance), re-sorting terminals along the new outer walk.
// perm receives new index -> old index.
Instance AsOneHole(const Instance& in, std::vector<int>* perm = nullptr);

// Walk position of the corner before dart d on its face.
int WalkPosition(const PlaneGraph& g, int d);

// Same terminal count, same holes, and per hole the same circular order.
bool Aligned(const Instance& a, const Instance& b);

nlohmann::json GraphToJson(const PlaneGraph& g);
PlaneGraph GraphFromJson(const nlohmann::json& j);
nlohmann::json InstanceToJson(const Instance& in);
Instance InstanceFromJson(const nlohmann::json& j);
std::string DumpCanonical(const nlohmann::json& j);

}  // namespace emul
