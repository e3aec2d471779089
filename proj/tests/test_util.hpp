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

// Small graph builders and generators shared by the tests.

#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "emul/graph.hpp"
#include "emul/harness.hpp"
#include "emul/instance.hpp"

namespace emul::testing {

inline PlaneGraph Cycle(int n, double w = 1.0) {
  std::vector<std::pair<double, double>> xy;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    double a = 2 * M_PI * i / n;
    xy.emplace_back(std::cos(a), std::sin(a));
    edges.push_back({i, (i + 1) % n, w});
  }
  return PlaneGraph::FromCoordinates(xy, edges);
}

inline PlaneGraph Path(int n, double w = 1.0) {
  std::vector<std::pair<double, double>> xy;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    xy.emplace_back(i, 0);
    if (i + 1 < n) edges.push_back({i, i + 1, w});
  }
  return PlaneGraph::FromCoordinates(xy, edges);
}

// m x m grid; vertex (x, y) has id y * m + x.
inline PlaneGraph Grid(int m, const std::vector<double>* weights = nullptr) {
  std::vector<std::pair<double, double>> xy;
  std::vector<Edge> edges;
  for (int y = 0; y < m; ++y)
    for (int x = 0; x < m; ++x) xy.emplace_back(x, y);
  for (int y = 0; y < m; ++y) {
    for (int x = 0; x < m; ++x) {
      int v = y * m + x;
      if (x + 1 < m) edges.push_back({v, v + 1, 1.0});
      if (y + 1 < m) edges.push_back({v, v + m, 1.0});
    }
  }
  if (weights) {
    for (size_t e = 0; e < edges.size(); ++e) edges[e].w = (*weights)[e % weights->size()];
  }
  return PlaneGraph::FromCoordinates(xy, edges);
}

inline Instance GenGrid(int m, int k, const char* weights, uint64_t seed,
                        const char* placement = "boundary", const char* family = "grid") {
  GeneratorSpec s;
  s.family = family;
  s.m = m;
  s.k = k;
  s.weights = weights;
  s.placement = placement;
  s.seed = seed;
  return Generate(s);
}

// Annulus of two concentric squares (outer side 2, inner side 1) joined
// by four spokes at the corners; every edge has weight 1.
// Outer corners 0..3, inner corners 4..7, counter-clockwise.
inline PlaneGraph SquareAnnulus() {
  std::vector<std::pair<double, double>> xy = {{-2, -2}, {2, -2}, {2, 2}, {-2, 2},
                                               {-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  std::vector<Edge> edges;
  for (int i = 0; i < 4; ++i) {
    edges.push_back({i, (i + 1) % 4, 1.0});
    edges.push_back({4 + i, 4 + (i + 1) % 4, 1.0});
    edges.push_back({i, 4 + i, 1.0});
  }
  return PlaneGraph::FromCoordinates(xy, edges);
}

inline double LogRatio(double a, double b) {
  if (a == b) return 0;
  return std::fabs(std::log(a / b));
}

}  // namespace emul::testing
