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

// Emulators for instances whose terminals lie on several holes. Two holes
// are merged by slicing along a path between them; the portals on the path
// become terminals of the merged hole.

#pragma once

#include <vector>

#include "emul/onehole.hpp"

namespace emul {

// Slices along p, whose first vertex lies on the face of hole hole_s and
// last vertex on the face of hole hole_t. Every vertex of ys (which must
// contain both endpoints) is split into two copies that become terminals;
// a terminal that is itself a portal is one of its copies. The result has
// one piece with one hole fewer.
// Throws SameHoleEndpoints, TerminalOnPathInterior, InvalidPortalSet.
SplitResult SplitH(const Instance& in, const Path& p, int hole_s, int hole_t,
                   const std::vector<int>& ys);

// Identifies the portal copies again.
Instance GlueH(const SplitPlan& plan, const Instance& emulator);

struct HoleMerge {
  int hole_s = -1;
  int hole_t = -1;
  Path path;
};
// Pair rule: the two holes with the most terminals (lower id on ties) and
// their first terminals in circular order, joined by a shortest path that
// avoids the terminals of other holes. The path is trimmed to run from its
// last visit of the first hole to the next vertex on any other hole, which
// is then the second hole; the interior touches no hole.
HoleMerge ChooseMerge(const Instance& in);

Instance MultiHoleEmulator(const Instance& in, const EmulatorParams& p,
                           EmulatorReport* report = nullptr);

}  // namespace emul
