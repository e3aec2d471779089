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

#include "emul/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace emul {

int Instance::num_holes() const {
  int h = 0;
  for (int x : hole) h = std::max(h, x + 1);
  return h;
}

std::vector<int> Instance::HoleFaces() const {
  std::vector<int> f(num_holes(), -1);
  for (int i = 0; i < k(); ++i) {
    if (hole[i] >= 0 && tdart[i] >= 0 && f[hole[i]] < 0) f[hole[i]] = g.face(tdart[i]);
  }
  return f;
}

int WalkPosition(const PlaneGraph& g, int d) {
  const auto& w = g.face_walk(g.face(d));
  return static_cast<int>(std::find(w.begin(), w.end(), d) - w.begin());
}

std::vector<int> Instance::CircularOrder(int h) const {
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < k(); ++i) {
    if (hole[i] != h) continue;
    pos.emplace_back(tdart[i] >= 0 ? WalkPosition(g, tdart[i]) : 0, i);
  }
  std::sort(pos.begin(), pos.end());
  std::vector<int> out;
  for (auto& p : pos) out.push_back(p.second);
  return out;
}

namespace {

// Walk position of the first corner of v on face f, or -1.
int FirstCornerOn(const PlaneGraph& g, int f, int v, int* dart) {
  const auto& w = g.face_walk(f);
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (g.origin(w[i]) == v) {
      *dart = w[i];
      return i;
    }
  }
  return -1;
}

}  // namespace

Instance MakeOneHole(PlaneGraph g, const std::vector<int>& terminal_vertices) {
  Instance in;
  in.g = std::move(g);
  std::vector<std::tuple<int, int, int>> rows;  // position, vertex, dart
  for (int v : terminal_vertices) {
    int d = -1, pos = 0;
    if (in.g.num_edges() > 0) {
      pos = FirstCornerOn(in.g, in.g.outer_face(), v, &d);
      if (pos < 0) throw Error(ErrorKind::kBadSpec, "terminal not on the outer face");
    }
    rows.emplace_back(pos, v, d);
  }
  std::sort(rows.begin(), rows.end());
  for (auto& [pos, v, d] : rows) {
    in.terms.push_back(v);
    in.tdart.push_back(d);
    in.hole.push_back(0);
  }
  return in;
}

Instance MakeGeneral(PlaneGraph g, const std::vector<int>& terminal_vertices) {
  Instance in;
  in.g = std::move(g);
  for (int v : terminal_vertices) {
    in.terms.push_back(v);
    in.tdart.push_back(in.g.degree(v) ? in.g.rotation(v).front() : -1);
    in.hole.push_back(-1);
  }
  return in;
}

Instance MakeHoles(PlaneGraph g, const std::vector<std::vector<int>>& holes) {
  Instance in;
  in.g = std::move(g);
  for (int h = 0; h < static_cast<int>(holes.size()); ++h) {
    int chosen = -1;
    std::vector<int> cand;
    if (in.g.outer_face() >= 0) cand.push_back(in.g.outer_face());
    for (int f = 0; f < in.g.num_faces(); ++f) cand.push_back(f);
    for (int f : cand) {
      bool all = true;
      for (int v : holes[h]) {
        int d;
        if (FirstCornerOn(in.g, f, v, &d) < 0) {
          all = false;
          break;
        }
      }
      if (all) {
        chosen = f;
        break;
      }
    }
    if (chosen < 0) throw Error(ErrorKind::kBadSpec, "hole vertices share no face");
    for (int v : holes[h]) {
      int d;
      FirstCornerOn(in.g, chosen, v, &d);
      in.terms.push_back(v);
      in.tdart.push_back(d);
      in.hole.push_back(h);
    }
  }
  return in;
}

Instance AsOneHole(const Instance& in, std::vector<int>* perm) {
  Instance out;
  int start = -1;
  for (int i = 0; i < in.k(); ++i) {
    if (in.tdart[i] >= 0) {
      start = in.tdart[i];
      break;
    }
  }
  out.g = start >= 0 ? in.g.WithOuterDart(start) : in.g;
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < in.k(); ++i) {
    pos.emplace_back(in.tdart[i] >= 0 ? WalkPosition(out.g, in.tdart[i]) : 0, i);
  }
  std::sort(pos.begin(), pos.end());
  if (perm) perm->clear();
  for (auto& [p, i] : pos) {
    out.terms.push_back(in.terms[i]);
    out.tdart.push_back(in.tdart[i]);
    out.hole.push_back(0);
    if (perm) perm->push_back(i);
  }
  return out;
}

bool Aligned(const Instance& a, const Instance& b) {
  if (a.k() != b.k() || a.hole != b.hole) return false;
  auto fa = a.HoleFaces(), fb = b.HoleFaces();
  for (int h = 0; h < a.num_holes(); ++h) {
    for (int i = 0; i < a.k(); ++i) {
      if (a.hole[i] != h) continue;
      if ((a.tdart[i] >= 0 && a.g.face(a.tdart[i]) != fa[h]) ||
          (b.tdart[i] >= 0 && b.g.face(b.tdart[i]) != fb[h])) {
        return false;
      }
    }
    auto oa = a.CircularOrder(h), ob = b.CircularOrder(h);
    if (oa.size() != ob.size()) return false;
    if (oa.empty()) continue;
    auto it = std::find(ob.begin(), ob.end(), oa[0]);
    if (it == ob.end()) return false;
    std::rotate(ob.begin(), it, ob.end());
    if (oa != ob) return false;
  }
  return true;
}

namespace {

nlohmann::json WeightJson(double w) {
  if (std::floor(w) == w && std::fabs(w) < 9007199254740992.0) {
    return static_cast<long long>(w);
  }
  return w;
}

}  // namespace

nlohmann::json GraphToJson(const PlaneGraph& g) {
  nlohmann::json j;
  j["n"] = g.num_vertices();
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, WeightJson(e.w)});
  j["edges"] = std::move(edges);
  nlohmann::json rots = nlohmann::json::array();
  for (int v = 0; v < g.num_vertices(); ++v) rots.push_back(g.rotation(v));
  j["rotations"] = std::move(rots);
  j["outerface_dart"] = g.outer_dart();
  return j;
}

PlaneGraph GraphFromJson(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    }
    std::vector<std::vector<int>> rot;
    for (const auto& r : j.at("rotations")) rot.push_back(r.get<std::vector<int>>());
    int od = j.value("outerface_dart", edges.empty() ? -1 : 0);
    return PlaneGraph::Build(n, std::move(edges), std::move(rot), od);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kBadSpec, ex.what());
  }
}

nlohmann::json InstanceToJson(const Instance& in) {
  nlohmann::json j = GraphToJson(in.g);
  j["terminals"] = in.terms;
  j["terminal_darts"] = in.tdart;
  if (in.num_holes() > 0) {
    nlohmann::json holes = nlohmann::json::array();
    for (int h = 0; h < in.num_holes(); ++h) holes.push_back(in.CircularOrder(h));
    j["holes"] = std::move(holes);
  }
  return j;
}

Instance InstanceFromJson(const nlohmann::json& j) {
  PlaneGraph g = GraphFromJson(j);
  std::vector<int> terms = j.value("terminals", std::vector<int>{});
  for (int t : terms) {
    if (t < 0 || t >= g.num_vertices()) throw Error(ErrorKind::kBadSpec, "terminal out of range");
  }
  if (j.contains("terminal_darts")) {
    Instance in;
    in.g = std::move(g);
    in.terms = terms;
    in.tdart = j.at("terminal_darts").get<std::vector<int>>();
    in.hole.assign(terms.size(), -1);
    if (in.tdart.size() != terms.size()) throw Error(ErrorKind::kBadSpec, "terminal_darts size");
    for (int i = 0; i < in.k(); ++i) {
      int d = in.tdart[i];
      if (d >= in.g.num_darts() || (d >= 0 && in.g.origin(d) != in.terms[i])) {
        throw Error(ErrorKind::kBadSpec, "terminal dart does not leave its terminal");
      }
    }
    if (j.contains("holes")) {
      int h = 0;
      for (const auto& hl : j.at("holes")) {
        for (int i : hl.get<std::vector<int>>()) {
          if (i < 0 || i >= in.k()) throw Error(ErrorKind::kBadSpec, "hole lists unknown terminal");
          in.hole[i] = h;
        }
        ++h;
      }
    }
    return in;
  }
  if (j.contains("holes")) {
    std::vector<std::vector<int>> holes;
    for (const auto& hl : j.at("holes")) {
      holes.emplace_back();
      for (int i : hl.get<std::vector<int>>()) {
        if (i < 0 || i >= static_cast<int>(terms.size())) {
          throw Error(ErrorKind::kBadSpec, "hole lists unknown terminal");
        }
        holes.back().push_back(terms[i]);
      }
    }
    return MakeHoles(std::move(g), holes);
  }
  return MakeGeneral(std::move(g), terms);
}

std::string DumpCanonical(const nlohmann::json& j) { return j.dump(); }

}  // namespace emul
