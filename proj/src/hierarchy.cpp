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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "emul/onehole.hpp"

namespace emul {

namespace {

int Find(std::vector<int>& uf, int x) {
  while (uf[x] != x) x = uf[x] = uf[uf[x]];
  return x;
}

}  // namespace

ClusterHierarchy BuildClusterHierarchy(const std::vector<std::vector<double>>& dist, int r,
                                       const EmulatorParams& p) {
  const int k = static_cast<int>(dist.size());
  ClusterHierarchy h;
  h.mu = std::pow(static_cast<double>(r), p.mu_exp);
  h.eps_prime = std::pow(static_cast<double>(r), -p.eps_prime_exp);
  double dmin = kInf, dmax = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (dist[i][j] > 0) dmin = std::min(dmin, dist[i][j]);
      dmax = std::max(dmax, dist[i][j]);
    }
  }
  h.scale = dmin < kInf ? dmin : 1.0;
  double spread = dmax / h.scale;
  h.L = std::max(1, static_cast<int>(std::ceil(std::log(spread) / std::log(h.mu) - 1e-12)));

  // Level 0: singletons.
  std::vector<int> cluster_of(k);
  h.levels.emplace_back();
  for (int i = 0; i < k; ++i) {
    cluster_of[i] = static_cast<int>(h.clusters.size());
    h.levels[0].push_back(cluster_of[i]);
    h.clusters.push_back({{i}, 0, -1, false});
  }
  for (int lvl = 1; lvl <= h.L; ++lvl) {
    const double thr = std::pow(h.mu, lvl) * h.scale;
    std::vector<int> uf(k);
    std::iota(uf.begin(), uf.end(), 0);
    // Start from the previous level's clusters.
    for (int c : h.levels[lvl - 1]) {
      const auto& m = h.clusters[c].members;
      for (size_t a = 1; a < m.size(); ++a) uf[Find(uf, m[a])] = Find(uf, m[0]);
    }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (dist[i][j] <= thr || lvl == h.L) uf[Find(uf, i)] = Find(uf, j);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < k; ++i) groups[Find(uf, i)].push_back(i);
    // Deterministic order: by smallest member.
    std::vector<std::vector<int>> ordered;
    for (auto& [root, members] : groups) ordered.push_back(members);
    std::sort(ordered.begin(), ordered.end());
    h.levels.emplace_back();
    std::vector<int> next_of(k);
    for (auto& members : ordered) {
      int id = static_cast<int>(h.clusters.size());
      for (int t : members) next_of[t] = id;
      h.levels[lvl].push_back(id);
      h.clusters.push_back({members, lvl, -1, false});
    }
    for (int c : h.levels[lvl - 1]) {
      int parent = next_of[h.clusters[c].members[0]];
      h.clusters[c].parent = parent;
      h.clusters[c].expanding =
          h.clusters[parent].members.size() >=
          std::exp(h.eps_prime) * static_cast<double>(h.clusters[c].members.size());
    }
    cluster_of = next_of;
  }

  // Laminarity holds by construction; the diameter bound follows from
  // chaining at most |S| - 1 links of length mu^i. Both are re-checked.
  for (size_t c = 0; c < h.clusters.size(); ++c) {
    const auto& cl = h.clusters[c];
    if (cl.parent >= 0) {
      const auto& pm = h.clusters[cl.parent].members;
      if (!std::includes(pm.begin(), pm.end(), cl.members.begin(), cl.members.end())) {
        throw Error(ErrorKind::kHierarchyInconsistent, "cluster not inside its parent");
      }
    }
    if (cl.level == h.L) continue;
    const double bound = 2.0 * r * std::pow(h.mu, cl.level) * h.scale;
    for (int a : cl.members)
      for (int b : cl.members)
        if (dist[a][b] > bound * (1 + 1e-9)) {
          throw Error(ErrorKind::kHierarchyInconsistent, "cluster diameter above 2 r mu^i");
        }
  }
  if (h.levels.back().size() != 1 && k > 0) {
    throw Error(ErrorKind::kHierarchyInconsistent, "top level is not a single cluster");
  }
  return h;
}

}  // namespace emul
