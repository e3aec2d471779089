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

// Plane multigraphs given by a rotation system.
//
// Edge e owns darts 2e (u->v) and 2e+1 (v->u). rot(d) is the next dart
// counter-clockwise around origin(d). Faces are traced with
// next_in_face(d) = rot(twin(d)), so every face lies to the right of its
// darts and bounded faces are walked clockwise. The corner between d and
// rot(d) belongs to face(rot(d)); "the corner before d" is therefore a
// corner of face(d), which is how terminals record which face they sit on.

#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "emul/error.hpp"

namespace emul {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  int u = 0;
  int v = 0;
  double w = 0;
};

class PlaneGraph {
 public:
  PlaneGraph() = default;

  // rotations[v] lists the darts leaving v in counter-clockwise order.
  // outer_dart may be -1 only for graphs without edges. With
  // require_connected=false the graph may have several components; each
  // must still satisfy Euler's formula.
  static PlaneGraph Build(int n, std::vector<Edge> edges,
                          std::vector<std::vector<int>> rotations,
                          int outer_dart, bool require_connected = true);

  // Rotation from straight-line coordinates (angle order). Used by the
  // generators, which know a planar drawing.
  static PlaneGraph FromCoordinates(const std::vector<std::pair<double, double>>& xy,
                                    std::vector<Edge> edges, int outer_dart = -1);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_darts() const { return 2 * num_edges(); }
  int num_faces() const { return static_cast<int>(face_walks_.size()); }

  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  static int twin(int d) { return d ^ 1; }
  static int edge_of(int d) { return d >> 1; }
  int origin(int d) const { return (d & 1) ? edges_[d >> 1].v : edges_[d >> 1].u; }
  int head(int d) const { return origin(twin(d)); }
  double weight(int d) const { return edges_[d >> 1].w; }
  int rot(int d) const { return rot_next_[d]; }
  int rot_prev(int d) const { return rot_prev_[d]; }
  int next_in_face(int d) const { return rot_next_[d ^ 1]; }
  int prev_in_face(int d) const { return rot_prev_[d] ^ 1; }
  int degree(int v) const { return static_cast<int>(rotation_[v].size()); }
  const std::vector<int>& rotation(int v) const { return rotation_[v]; }
  // Index of d inside rotation(origin(d)).
  int rotation_index(int d) const { return rot_index_[d]; }

  int face(int d) const { return face_of_[d]; }
  // Darts of face f in walk order. The outer face walk starts at outer_dart.
  const std::vector<int>& face_walk(int f) const { return face_walks_[f]; }
  int outer_dart() const { return outer_dart_; }
  int outer_face() const { return outer_dart_ < 0 ? -1 : face_of_[outer_dart_]; }

  // Same embedding, different designated outer face.
  PlaneGraph WithOuterDart(int d) const;

  // Connected component id per vertex.
  std::vector<int> Components(int* count = nullptr) const;

 private:
  void Finish(bool require_connected);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> rotation_;
  std::vector<int> rot_next_, rot_prev_, rot_index_;
  std::vector<int> face_of_;
  std::vector<std::vector<int>> face_walks_;
  int outer_dart_ = -1;
};

struct Path {
  int s = -1;
  int t = -1;
  std::vector<int> darts;
  double weight = 0;

  std::vector<int> Vertices(const PlaneGraph& g) const;
  int hops() const { return static_cast<int>(darts.size()); }
};

// Options for the deterministic Dijkstra.
struct SearchOptions {
  // Vertices that may be reached but not passed through (the source is
  // always usable).
  const std::vector<char>* blocked = nullptr;
  // Edges that may be used; null means all.
  const std::vector<char>* edge_ok = nullptr;
  // Tie-break keys per vertex and per edge; null means the ids.
  const std::vector<int>* vertex_key = nullptr;
  const std::vector<int>* edge_key = nullptr;
};

// Shortest-path tree under the tie-break order: total weight, then hop
// count, then the vertex sets compared by their smallest differing key
// (the set holding the smaller key wins), then edge keys. The order does
// not depend on the direction of a path and is preserved under common
// extension, so the tree paths are the unique minima and any two of them
// meet in one common subpath.
class ShortestPathTree {
 public:
  ShortestPathTree(const PlaneGraph& g, int source, const SearchOptions& opt = {});

  int source() const { return source_; }
  double dist(int v) const { return dist_[v]; }
  int hops(int v) const { return hops_[v]; }
  int parent_dart(int v) const { return pdart_[v]; }
  const std::vector<double>& dists() const { return dist_; }
  bool reached(int v) const { return dist_[v] < kInf; }
  Path PathTo(int v) const;

 private:
  bool Prefer(int a, int da, int b, int db) const;

  const PlaneGraph* g_;
  const SearchOptions opt_;
  int source_;
  std::vector<double> dist_;
  std::vector<int> hops_;
  std::vector<int> pdart_;
};

Path ShortestPath(const PlaneGraph& g, int s, int t, const SearchOptions& opt = {});

std::vector<std::vector<double>> AllTerminalDistances(const PlaneGraph& g,
                                                      const std::vector<int>& terminals);

// Articulation points, sorted.
std::vector<int> CutVertices(const PlaneGraph& g);

// Vertices visited more than once by the outer face walk, sorted.
std::vector<int> OuterRepeatedVertices(const PlaneGraph& g);

// Vertices incident to face f, each once, in walk order.
std::vector<int> FaceVertices(const PlaneGraph& g, int f);

// Sub-embedding on a subset of edges. Vertices without kept edges are
// dropped unless keep_vertex says otherwise. Each kept vertex keeps the
// induced cyclic order.
struct SubgraphResult {
  PlaneGraph g;
  std::vector<int> vmap;      // old vertex -> new vertex or -1
  std::vector<int> vorig;     // new vertex -> old vertex
  std::vector<int> dorig;     // new dart -> old dart
  std::vector<int> dmap;      // old dart -> new dart or -1
  // First surviving dart counter-clockwise from old dart d (inclusive),
  // i.e. the image of the corner before d. -1 if origin(d) has no edges left.
  int MapCorner(const PlaneGraph& old, int d) const;
};
SubgraphResult EdgeSubgraph(const PlaneGraph& g, const std::vector<char>& keep_edge,
                            const std::vector<char>* keep_vertex = nullptr,
                            bool require_connected = true);

// Slicing. Every edge in fedge is doubled; the darts around each vertex
// are cut into runs and each run becomes a vertex of the result. Around
// a vertex, a run is cut at every fedge dart (the dart's two copies go to
// the two runs meeting there) and, if the vertex is identified, at every
// corner listed in cut_corner (corner between d and rot(d)).
struct SliceSpec {
  std::vector<char> fedge;       // per edge
  std::vector<char> identified;  // per vertex
  std::vector<char> cut_corner;  // per dart
};

struct SliceResult {
  PlaneGraph g;  // may be disconnected
  std::vector<int> vorig;   // new vertex -> old vertex
  std::vector<int> dorig;   // new dart -> old dart
  std::vector<int> first_dart;  // new vertex -> first dart of its run, -1 if none
  // old vertex -> new vertices, in counter-clockwise run order.
  std::vector<std::vector<int>> runs;
  std::vector<int> comp;   // new vertex -> component
  int num_comps = 0;
  // New vertex holding the corner before old dart d.
  std::vector<int> corner_owner;  // per old dart
  // New dart whose preceding corner is the image of the corner before d.
  std::vector<int> corner_dart;
  // Image of old dart d that is not an fedge copy; for fedge darts the
  // copy on the run that starts with d.
  std::vector<int> dmap;
};
SliceResult Slice(const PlaneGraph& g, const SliceSpec& spec);

// Convenience form of the operation with the textbook signature: slices
// along one path whose endpoints lie on the outer face. Endpoints are
// cut at their outer corners; interior vertices only at the path.
SliceResult SliceAlongPath(const PlaneGraph& g, const Path& p);

// Builder for rotation systems assembled dart by dart.
class EmbeddingBuilder {
 public:
  int AddVertex();
  int AddVertices(int count);
  // Returns the dart u->v; its twin is the returned id ^ 1.
  int AddEdge(int u, int v, double w);
  // Rotation of v, counter-clockwise.
  void SetRotation(int v, std::vector<int> darts);
  std::vector<int>& rotation(int v) { return rotations_[v]; }
  int num_vertices() const { return static_cast<int>(rotations_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  PlaneGraph Build(int outer_dart, bool require_connected = true) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> rotations_;
};

// In-place editor used by the base-case reduction: deletes edges,
// suppresses degree-2 vertices, and keeps a set of tracked darts pointing
// at live darts (a deleted tracked dart moves to its ccw successor).
class EmbeddingEditor {
 public:
  explicit EmbeddingEditor(const PlaneGraph& g);

  bool alive_edge(int e) const { return alive_[e]; }
  int degree(int v) const { return static_cast<int>(rot_[v].size()); }
  const std::vector<int>& rotation(int v) const { return rot_[v]; }
  int origin(int d) const { return (d & 1) ? edges_[d >> 1].v : edges_[d >> 1].u; }
  int head(int d) const { return origin(d ^ 1); }
  double weight(int d) const { return edges_[d >> 1].w; }

  void RemoveEdge(int e);
  // v must have exactly two darts; the two edges are replaced by one
  // edge carrying the sum of the weights. Returns false when the two
  // darts form a loop through v only (then both edges are removed).
  bool SuppressVertex(int v);

  int Track(int dart);
  int tracked(int handle) const { return tracked_[handle]; }

  // Compacts to a PlaneGraph. Vertices with no darts are dropped unless
  // keep[v] is set. vmap receives old -> new vertex ids, dmap old -> new darts.
  PlaneGraph Compact(const std::vector<char>& keep, std::vector<int>* vmap,
                     std::vector<int>* dmap, int outer_dart) const;

 private:
  void Erase(int d);

  std::vector<Edge> edges_;
  std::vector<char> alive_;
  std::vector<std::vector<int>> rot_;
  std::vector<int> tracked_;
};

}  // namespace emul
