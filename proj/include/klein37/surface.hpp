// Copyright 2026 The Klein37 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "klein37/geom.hpp"
#include "klein37/solids.hpp"

namespace klein37 {

/// Thrown for combinatorial defects: non-manifold edges, non-closed input
/// where closed is required, failed identifications.
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Indexed triangle mesh. Vertices are combinatorial: two indices may sit
/// at the same point when sheets of an immersion meet.
struct TriangleSurface {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
  /// Per triangle, index into `solid_paths` of the originating solid. Empty
  /// for surfaces that were not assembled from solids.
  std::vector<int> triangle_solid;
  std::vector<SolidPath> solid_paths;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  std::array<Point3, 3> triangle_points(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }

  bool operator==(const TriangleSurface&) const = default;
};

using EdgeKey = std::uint64_t;

inline EdgeKey directed_edge_key(int a, int b) {
  return (static_cast<EdgeKey>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}
inline EdgeKey undirected_edge_key(int a, int b) {
  return a < b ? directed_edge_key(a, b) : directed_edge_key(b, a);
}

/// Local edge `e` of triangle t runs from t[e] to t[(e+1)%3].
struct HalfEdge {
  int triangle = -1;
  int edge = -1;
  bool valid() const { return triangle >= 0; }
  bool operator==(const HalfEdge&) const = default;
};

/// Triangle adjacency. Built once per surface; throws TopologyError naming
/// the offending edge if any edge has three or more incident triangles.
class AdjacencyIndex {
 public:
  explicit AdjacencyIndex(const TriangleSurface& s) : s_(&s) {
    const int nt = s.num_triangles();
    neighbor_.assign(nt, {HalfEdge{}, HalfEdge{}, HalfEdge{}});
    std::unordered_map<EdgeKey, HalfEdge> first;
    first.reserve(static_cast<std::size_t>(nt) * 2);
    for (int t = 0; t < nt; ++t) {
      for (int e = 0; e < 3; ++e) {
        const int a = s.triangles[t][e];
        const int b = s.triangles[t][(e + 1) % 3];
        const EdgeKey key = undirected_edge_key(a, b);
        auto [it, inserted] = first.try_emplace(key, HalfEdge{t, e});
        if (inserted) continue;
        const HalfEdge other = it->second;
        if (neighbor_[other.triangle][other.edge].valid())
          throw TopologyError("non-manifold edge (" + std::to_string(a) + ", " +
                              std::to_string(b) + "): three or more incident triangles");
        neighbor_[other.triangle][other.edge] = {t, e};
        neighbor_[t][e] = other;
      }
    }
    num_edges_ = static_cast<int>(first.size());
  }

  /// The half-edge on the other side of local edge `e` of `t`, or invalid on
  /// the boundary.
  HalfEdge opposite(int t, int e) const { return neighbor_[t][e]; }
  int neighbor(int t, int e) const { return neighbor_[t][e].triangle; }
  bool is_boundary(int t, int e) const { return !neighbor_[t][e].valid(); }
  int num_edges() const { return num_edges_; }
  const TriangleSurface& surface() const { return *s_; }

  /// Local index of the edge a->b in triangle t (either direction), or -1.
  int local_edge(int t, int a, int b) const {
    const auto& tri = s_->triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int u = tri[e];
      const int v = tri[(e + 1) % 3];
      if ((u == a && v == b) || (u == b && v == a)) return e;
    }
    return -1;
  }

 private:
  const TriangleSurface* s_;
  std::vector<std::array<HalfEdge, 3>> neighbor_;
  int num_edges_ = 0;
};

struct VertexDegrees {
  std::vector<int> degree;  ///< incident triangle count per vertex
  std::vector<bool> on_boundary;

  /// degree -> number of vertices, over vertices used by some triangle.
  std::map<int, int> histogram(bool interior_only = false) const {
    std::map<int, int> h;
    for (std::size_t v = 0; v < degree.size(); ++v) {
      if (degree[v] == 0 || (interior_only && on_boundary[v])) continue;
      ++h[degree[v]];
    }
    return h;
  }
};

inline VertexDegrees vertex_degrees(const TriangleSurface& s, const AdjacencyIndex& adj) {
  VertexDegrees d;
  d.degree.assign(s.num_vertices(), 0);
  d.on_boundary.assign(s.num_vertices(), false);
  for (int t = 0; t < s.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      ++d.degree[s.triangles[t][e]];
      if (adj.is_boundary(t, e)) {
        d.on_boundary[s.triangles[t][e]] = true;
        d.on_boundary[s.triangles[t][(e + 1) % 3]] = true;
      }
    }
  }
  return d;
}

inline VertexDegrees vertex_degrees(const TriangleSurface& s) {
  return vertex_degrees(s, AdjacencyIndex(s));
}

struct SimplexCounts {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler() const { return vertices - edges + faces; }
};

/// V, E, F over the simplices actually used by triangles.
inline SimplexCounts simplex_counts(const TriangleSurface& s, const AdjacencyIndex& adj) {
  std::vector<bool> used(s.num_vertices(), false);
  for (const auto& t : s.triangles)
    for (int v : t) used[v] = true;
  SimplexCounts c;
  for (bool u : used) c.vertices += u ? 1 : 0;
  c.edges = adj.num_edges();
  c.faces = s.num_triangles();
  return c;
}

inline int euler_characteristic(const TriangleSurface& s) {
  return simplex_counts(s, AdjacencyIndex(s)).euler();
}

/// True iff every interior edge is traversed in opposite directions by its
/// two triangles.
inline bool is_oriented(const TriangleSurface& s, const AdjacencyIndex& adj) {
  for (int t = 0; t < s.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const HalfEdge o = adj.opposite(t, e);
      if (!o.valid()) continue;
      // Same direction means the start vertices agree.
      if (s.triangles[t][e] == s.triangles[o.triangle][o.edge]) return false;
    }
  }
  return true;
}

inline bool is_oriented(const TriangleSurface& s) { return is_oriented(s, AdjacencyIndex(s)); }

inline bool is_closed(const AdjacencyIndex& adj) {
  const auto& s = adj.surface();
  for (int t = 0; t < s.num_triangles(); ++t)
    for (int e = 0; e < 3; ++e)
      if (adj.is_boundary(t, e)) return false;
  return true;
}

/// A boundary loop as a cyclic vertex sequence; edge i runs from
/// vertices[i] to vertices[i+1], following the winding of the adjacent
/// triangles.
struct BoundaryLoop {
  std::vector<int> vertices;
  std::size_t size() const { return vertices.size(); }
};

/// Partition of the boundary edges into closed loops. Expects an oriented
/// manifold surface; loops at pinch vertices are separated by walking the
/// triangle fan around the shared vertex.
inline std::vector<BoundaryLoop> boundary_loops(const TriangleSurface& s, const AdjacencyIndex& adj) {
  std::vector<BoundaryLoop> loops;
  std::vector<std::array<bool, 3>> seen(s.num_triangles(), {false, false, false});
  for (int t0 = 0; t0 < s.num_triangles(); ++t0) {
    for (int e0 = 0; e0 < 3; ++e0) {
      if (!adj.is_boundary(t0, e0) || seen[t0][e0]) continue;
      BoundaryLoop loop;
      int t = t0;
      int e = e0;
      while (!seen[t][e]) {
        seen[t][e] = true;
        loop.vertices.push_back(s.triangles[t][e]);
        // Rotate about the edge's end vertex until the next boundary edge.
        int nt = t;
        int ne = (e + 1) % 3;
        int guard = s.num_triangles();
        while (!adj.is_boundary(nt, ne)) {
          const HalfEdge o = adj.opposite(nt, ne);
          nt = o.triangle;
          ne = (o.edge + 1) % 3;
          if (--guard < 0) throw TopologyError("boundary_loops: surface is not oriented");
        }
        t = nt;
        e = ne;
      }
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

inline std::vector<BoundaryLoop> boundary_loops(const TriangleSurface& s) {
  return boundary_loops(s, AdjacencyIndex(s));
}

/// (2 - chi) / 2 for a closed oriented surface.
inline int genus(const TriangleSurface& s) {
  const AdjacencyIndex adj(s);
  if (!is_closed(adj)) throw TopologyError("genus: surface has boundary");
  if (!is_oriented(s, adj)) throw TopologyError("genus: surface is not oriented");
  const int chi = simplex_counts(s, adj).euler();
  return (2 - chi) / 2;
}

/// Triangles around vertex `v` of triangle `t`, in rotational order starting
/// at `t`. Stops at the boundary on either side (the fan is then not closed).
inline std::vector<int> vertex_fan(const AdjacencyIndex& adj, int t, int v, bool* closed = nullptr) {
  const auto& s = adj.surface();
  std::vector<int> fan{t};
  int ct = t;
  for (;;) {
    const auto& tri = s.triangles[ct];
    int local = 0;
    while (tri[local] != v) ++local;
    // Edge entering v in ct's winding: (local+2)%3 runs tri[local-1] -> v.
    const HalfEdge o = adj.opposite(ct, (local + 2) % 3);
    if (!o.valid()) {
      if (closed) *closed = false;
      return fan;
    }
    ct = o.triangle;
    if (ct == t) {
      if (closed) *closed = true;
      return fan;
    }
    fan.push_back(ct);
  }
}

}  // namespace klein37
