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
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "klein37/geom.hpp"
#include "klein37/solids.hpp"
#include "klein37/surface.hpp"

namespace klein37 {

/// Which of the two edge pairs of an antiprism's far square receives the
/// next prism's apex direction. Fixed for a whole growth run.
enum class Chirality : std::uint8_t { Left, Right };

inline const char* to_string(Chirality c) { return c == Chirality::Left ? "left" : "right"; }

/// Motion placing a prism on the far (x = -h) square of the canonical
/// antiprism, seen from the antiprism's frame. The prism's glued square maps
/// vertex-to-vertex onto the far square and its apex lands at x = -h - sqrt(3/2).
///
/// Right sends the apex edge to {(d, -1/2, 1/2), (d, 1/2, -1/2)}; Left is the
/// conjugate by the reflection z -> -z and sends it to {(d, -1/2, -1/2),
/// (d, 1/2, 1/2)}.
inline RigidMotion glue_transform(Chirality c) {
  const double r = 1.0 / std::numbers::sqrt2;
  const RigidMotion right{Mat3::from_columns({-1, 0, 0}, {0, -r, -r}, {0, -r, r}), {0, 0, 0}};
  if (c == Chirality::Right) return right;
  const RigidMotion flip = reflection({0, 0, 0}, {0, 0, 1});
  return compose(flip, compose(right, flip));
}

namespace detail {

inline int match_vertex(const std::vector<Point3>& pts, const Point3& q) {
  int best = -1;
  double best_d = INFINITY;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double d = distance(pts[i], q);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (best_d > 1e-9) throw GeometryError("vertex match failed while building gluing tables");
  return best;
}

/// Gluing tables derived once from the canonical solids.
struct GlueTables {
  /// slot_map[j][i]: prism vertex that antiprism vertex i (0..3) lands on
  /// when the antiprism hangs from prism slot j.
  std::array<std::array<int, 4>, 3> slot_map{};
  /// child_map[c][i]: antiprism vertex that child-prism vertex i (0..3)
  /// lands on, for chirality c (0 = Left, 1 = Right).
  std::array<std::array<int, 4>, 2> child_map{};
  std::array<RigidMotion, 3> slot_motion{};

  static const GlueTables& get() {
    static const GlueTables t = build();
    return t;
  }

 private:
  static GlueTables build() {
    GlueTables t;
    const Solid prism = canonical_prism();
    const Solid anti = canonical_antiprism();
    const RigidMotion r3 = prism_slot_rotation();
    RigidMotion m = RigidMotion::identity();
    for (int j = 0; j < 3; ++j) {
      t.slot_motion[j] = m;
      for (int i = 0; i < 4; ++i) t.slot_map[j][i] = match_vertex(prism.vertices, m.apply(anti.vertices[i]));
      m = compose(r3, m);
    }
    for (int c = 0; c < 2; ++c) {
      const RigidMotion g = glue_transform(c == 0 ? Chirality::Left : Chirality::Right);
      for (int i = 0; i < 4; ++i) t.child_map[c][i] = match_vertex(anti.vertices, g.apply(prism.vertices[i]));
    }
    return t;
  }
};

}  // namespace detail

/// A solid placed in space: `frame` applied to the canonical solid of its kind.
struct PlacedSolid {
  SolidKind kind = SolidKind::Prism;
  RigidMotion frame;
  SolidPath path;
  int parent = -1;
  int parent_slot = -1;  ///< antiprisms: the parent prism's square slot
  int depth = 0;         ///< growth iteration that created the solid
  std::vector<int> vertex_ids;    ///< surface vertex per local vertex
  std::vector<int> triangle_ids;  ///< surface triangle per local triangle
  std::vector<bool> square_used;  ///< per local square, glued to a neighbour
};

/// An unglued square at the growth frontier, in outward cyclic order.
struct FreeSquare {
  int solid = -1;
  int square = -1;
  std::array<int, 4> vertex_ids{};
};

/// Trivalent tree decorated with prisms at nodes and antiprisms at edges.
struct DecorationTree {
  Chirality chirality = Chirality::Right;
  int iterations = 0;
  std::vector<PlacedSolid> solids;
  std::vector<std::pair<int, int>> glued;  ///< (parent, child) solid pairs

  int count(SolidKind k) const {
    int n = 0;
    for (const auto& s : solids) n += s.kind == k ? 1 : 0;
    return n;
  }

  std::vector<FreeSquare> frontier() const {
    std::vector<FreeSquare> out;
    for (int i = 0; i < static_cast<int>(solids.size()); ++i) {
      const auto& s = solids[i];
      const Solid& canon = canonical(s.kind);
      for (int q = 0; q < static_cast<int>(s.square_used.size()); ++q) {
        if (s.square_used[q]) continue;
        FreeSquare f{i, q, {}};
        for (int k = 0; k < 4; ++k) f.vertex_ids[k] = s.vertex_ids[canon.squares[q][k]];
        out.push_back(f);
      }
    }
    return out;
  }

  /// True iff `a` is `b` or an ancestor of `b`.
  bool is_ancestor(int a, int b) const {
    for (int x = b; x >= 0; x = solids[x].parent)
      if (x == a) return true;
    return false;
  }

  static const Solid& canonical(SolidKind k) {
    static const Solid prism = canonical_prism();
    static const Solid anti = canonical_antiprism();
    return k == SolidKind::Prism ? prism : anti;
  }
};

/// Incremental builder shared by `grow` and the fundamental piece. Solids
/// are appended in call order; vertices are only shared through gluing.
class Assembler {
 public:
  explicit Assembler(Chirality c) {
    tree_.chirality = c;
    surface_.solid_paths.clear();
    add_solid(SolidKind::Prism, RigidMotion::identity(), {}, -1, -1, 0, {});
  }

  /// Hangs a canonical antiprism from square `slot` of prism `prism`.
  int attach_antiprism(int prism, int slot, int depth) {
    const auto& t = detail::GlueTables::get();
    const PlacedSolid& p = tree_.solids.at(prism);
    if (p.kind != SolidKind::Prism || slot < 0 || slot > 2 || p.square_used[slot])
      throw TopologyError("attach_antiprism: slot unavailable");
    std::vector<std::pair<int, int>> shared;
    for (int i = 0; i < 4; ++i) shared.emplace_back(i, p.vertex_ids[t.slot_map[slot][i]]);
    SolidPath path = p.path;
    path.push_back(static_cast<std::uint8_t>(slot));
    const RigidMotion frame = compose(p.frame, t.slot_motion[slot]);
    tree_.solids[prism].square_used[slot] = true;
    const int id = add_solid(SolidKind::Antiprism, frame, std::move(path), prism, slot, depth, shared);
    tree_.solids[id].square_used[0] = true;
    return id;
  }

  /// Places a prism on the far square of antiprism `anti` using the run's
  /// chirality.
  int attach_prism(int anti, int depth) {
    const auto& t = detail::GlueTables::get();
    const PlacedSolid& a = tree_.solids.at(anti);
    if (a.kind != SolidKind::Antiprism || a.square_used[1])
      throw TopologyError("attach_prism: far square unavailable");
    const int c = tree_.chirality == Chirality::Left ? 0 : 1;
    std::vector<std::pair<int, int>> shared;
    for (int i = 0; i < 4; ++i) shared.emplace_back(i, a.vertex_ids[t.child_map[c][i]]);
    const RigidMotion frame = compose(a.frame, glue_transform(tree_.chirality));
    SolidPath path = a.path;
    tree_.solids[anti].square_used[1] = true;
    const int id = add_solid(SolidKind::Prism, frame, std::move(path), anti, -1, depth, shared);
    tree_.solids[id].square_used[0] = true;
    return id;
  }

  void set_iterations(int k) { tree_.iterations = k; }
  const DecorationTree& tree() const { return tree_; }
  const TriangleSurface& surface() const { return surface_; }
  DecorationTree take_tree() { return std::move(tree_); }
  TriangleSurface take_surface() { return std::move(surface_); }

 private:
  int add_solid(SolidKind kind, const RigidMotion& frame, SolidPath path, int parent, int parent_slot,
                int depth, const std::vector<std::pair<int, int>>& shared) {
    const Solid& canon = DecorationTree::canonical(kind);
    const int id = static_cast<int>(tree_.solids.size());
    PlacedSolid ps;
    ps.kind = kind;
    ps.frame = frame;
    ps.path = std::move(path);
    ps.parent = parent;
    ps.parent_slot = parent_slot;
    ps.depth = depth;
    ps.vertex_ids.assign(canon.vertices.size(), -1);
    ps.square_used.assign(canon.squares.size(), false);
    for (auto [local, global] : shared) ps.vertex_ids[local] = global;
    for (std::size_t i = 0; i < canon.vertices.size(); ++i) {
      if (ps.vertex_ids[i] >= 0) continue;
      ps.vertex_ids[i] = surface_.num_vertices();
      surface_.vertices.push_back(frame.apply(canon.vertices[i]));
    }
    for (const auto& tri : canon.triangles) {
      ps.triangle_ids.push_back(surface_.num_triangles());
      surface_.triangles.push_back({ps.vertex_ids[tri[0]], ps.vertex_ids[tri[1]], ps.vertex_ids[tri[2]]});
      surface_.triangle_solid.push_back(id);
    }
    surface_.solid_paths.push_back(ps.path);
    if (parent >= 0) tree_.glued.emplace_back(parent, id);
    tree_.solids.push_back(std::move(ps));
    return id;
  }

  DecorationTree tree_;
  TriangleSurface surface_;
};

struct GrowResult {
  DecorationTree tree;
  TriangleSurface surface;
};

/// Grows the decoration for `iterations` rounds. Round k hangs an antiprism
/// from every free prism square, then a prism from every new antiprism.
/// Frontier squares are left out of the surface and listed by
/// `DecorationTree::frontier()`.
inline GrowResult grow(int iterations, Chirality c) {
  if (iterations < 0) throw std::invalid_argument("grow: iterations must be nonnegative");
  Assembler as(c);
  std::vector<int> frontier{0};
  for (int k = 1; k <= iterations; ++k) {
    std::vector<int> antis;
    for (int p : frontier)
      for (int slot = 0; slot < 3; ++slot)
        if (!as.tree().solids[p].square_used[slot]) antis.push_back(as.attach_antiprism(p, slot, k));
    frontier.clear();
    for (int a : antis) frontier.push_back(as.attach_prism(a, k));
  }
  as.set_iterations(iterations);
  return {as.take_tree(), as.take_surface()};
}

/// Expected (prisms, antiprisms, triangles) after `k` rounds.
struct GrowthCounts {
  long long prisms = 0;
  long long antiprisms = 0;
  long long triangles = 0;
  bool operator==(const GrowthCounts&) const = default;
};

inline GrowthCounts expected_growth_counts(int k) {
  GrowthCounts g;
  g.antiprisms = 3 * ((1LL << k) - 1);
  g.prisms = 1 + g.antiprisms;
  g.triangles = 2 * g.prisms + 8 * g.antiprisms;
  return g;
}

/// The reflection used by `mirror`: z -> -z.
inline RigidMotion mirror_reflection() { return reflection({0, 0, 0}, {0, 0, 1}); }

/// Image of `s` under z -> -z, with winding reversed to keep orientation.
inline TriangleSurface mirror(const TriangleSurface& s) {
  TriangleSurface out = s;
  for (auto& v : out.vertices) v.z = -v.z;
  for (auto& t : out.triangles) std::swap(t[1], t[2]);
  return out;
}

namespace detail {

/// Uniform grid hash over points, for neighbourhood lookups.
class PointGrid {
 public:
  PointGrid(const std::vector<Point3>& pts, double cell) : cell_(cell) {
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) cells_[key(pts[i])].push_back(i);
  }

  template <class Fn>
  void for_each_near(const Point3& p, Fn&& fn) const {
    const auto c = coords(p);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = cells_.find(pack(c[0] + dx, c[1] + dy, c[2] + dz));
          if (it == cells_.end()) continue;
          for (int i : it->second) fn(i);
        }
  }

 private:
  std::array<std::int64_t, 3> coords(const Point3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)), static_cast<std::int64_t>(std::floor(p.y / cell_)),
            static_cast<std::int64_t>(std::floor(p.z / cell_))};
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    auto u = [](std::int64_t v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1FFFFF; };
    return (u(x) << 42) | (u(y) << 21) | u(z);
  }
  std::uint64_t key(const Point3& p) const {
    const auto c = coords(p);
    return pack(c[0], c[1], c[2]);
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace detail

/// A rigid motion carrying surface `a` onto surface `b`, with the induced
/// vertex correspondence.
struct Congruence {
  RigidMotion motion;
  std::vector<int> vertex_map;  ///< a-vertex -> b-vertex
  double max_deviation = 0.0;
};

/// Searches for a rigid motion (proper or improper) mapping every triangle of
/// `a` onto a triangle of `b` vertex-by-vertex within `eps`. Candidate motions
/// come from sending triangle 0 of `a` to every ordering of every triangle of
/// `b`; each candidate is then checked on all triangles.
inline std::optional<Congruence> find_congruence(const TriangleSurface& a, const TriangleSurface& b,
                                                 double eps = 1e-9) {
  if (a.num_triangles() != b.num_triangles() || a.num_vertices() != b.num_vertices() || a.num_triangles() == 0)
    return std::nullopt;
  std::vector<Point3> centroids;
  centroids.reserve(b.triangles.size());
  for (int t = 0; t < b.num_triangles(); ++t) {
    const auto p = b.triangle_points(t);
    centroids.push_back((p[0] + p[1] + p[2]) / 3.0);
  }
  const detail::PointGrid grid(centroids, 0.5);
  const auto src = a.triangle_points(0);
  const RigidMotion flip = mirror_reflection();
  static constexpr std::array<std::array<int, 3>, 6> kOrders{
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};

  for (int improper = 0; improper < 2; ++improper) {
    std::array<Point3, 3> s = src;
    if (improper)
      for (auto& p : s) p = flip.apply(p);
    for (int tb = 0; tb < b.num_triangles(); ++tb) {
      const auto q = b.triangle_points(tb);
      for (const auto& ord : kOrders) {
        const std::array<Point3, 3> dst{q[ord[0]], q[ord[1]], q[ord[2]]};
        bool same_shape = true;
        for (int i = 0; i < 3; ++i)
          if (std::abs(distance(s[i], s[(i + 1) % 3]) - distance(dst[i], dst[(i + 1) % 3])) > eps) same_shape = false;
        if (!same_shape) continue;
        RigidMotion m = align_triangles(s, dst);
        if (improper) m = compose(m, flip);

        Congruence cg;
        cg.motion = m;
        cg.vertex_map.assign(a.num_vertices(), -1);
        std::vector<bool> b_used(b.num_vertices(), false);
        bool ok = true;
        for (int ta = 0; ta < a.num_triangles() && ok; ++ta) {
          std::array<Point3, 3> img;
          for (int i = 0; i < 3; ++i) img[i] = m.apply(a.vertices[a.triangles[ta][i]]);
          const Point3 c = (img[0] + img[1] + img[2]) / 3.0;
          bool found = false;
          grid.for_each_near(c, [&](int cand) {
            if (found) return;
            const auto& tri = b.triangles[cand];
            std::array<int, 3> match{-1, -1, -1};
            double dev = 0.0;
            for (int i = 0; i < 3; ++i) {
              for (int j = 0; j < 3; ++j) {
                const double d = distance(img[i], b.vertices[tri[j]]);
                if (d <= eps) {
                  match[i] = tri[j];
                  dev = std::max(dev, d);
                }
              }
              if (match[i] < 0) return;
            }
            for (int i = 0; i < 3; ++i) {
              const int va = a.triangles[ta][i];
              if (cg.vertex_map[va] >= 0 && cg.vertex_map[va] != match[i]) return;
            }
            for (int i = 0; i < 3; ++i) cg.vertex_map[a.triangles[ta][i]] = match[i];
            cg.max_deviation = std::max(cg.max_deviation, dev);
            found = true;
          });
          ok = found;
        }
        if (!ok) continue;
        for (int v : cg.vertex_map) {
          if (v < 0) continue;
          if (b_used[v]) {
            ok = false;
            break;
          }
          b_used[v] = true;
        }
        if (ok) return cg;
      }
    }
  }
  return std::nullopt;
}

}  // namespace klein37
