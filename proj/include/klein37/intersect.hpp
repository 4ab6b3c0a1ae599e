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

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <vector>

#include "klein37/assembly.hpp"
#include "klein37/geom.hpp"
#include "klein37/surface.hpp"

namespace klein37 {

using TrianglePoints = std::array<Point3, 3>;

struct TriTriResult {
  bool intersects = false;
  std::optional<Point3> witness;
};

namespace detail {

inline int dominant_axis(const Vec3& n) {
  const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
  if (ax >= ay && ax >= az) return 0;
  return ay >= az ? 1 : 2;
}

struct P2 {
  double u, v;
};

inline P2 project(const Point3& p, int drop) {
  switch (drop) {
    case 0: return {p.y, p.z};
    case 1: return {p.z, p.x};
    default: return {p.x, p.y};
  }
}

inline double orient2d(P2 a, P2 b, P2 c) { return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u); }

inline bool point_in_triangle_2d(P2 p, const std::array<P2, 3>& t, double eps) {
  const double area = orient2d(t[0], t[1], t[2]);
  const double sgn = area > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 3; ++i) {
    const P2 a = t[i], b = t[(i + 1) % 3];
    const double len = std::hypot(b.u - a.u, b.v - a.v);
    if (sgn * orient2d(a, b, p) < -eps * len) return false;
  }
  return true;
}

/// Closed-segment intersection in 2D; returns the parameter on (a, b).
inline std::optional<double> segments_intersect_2d(P2 a, P2 b, P2 c, P2 d, double eps) {
  const double d1 = orient2d(c, d, a), d2 = orient2d(c, d, b);
  const double d3 = orient2d(a, b, c), d4 = orient2d(a, b, d);
  const double lab = std::hypot(b.u - a.u, b.v - a.v), lcd = std::hypot(d.u - c.u, d.v - c.v);
  const double e1 = eps * lcd, e2 = eps * lab;
  if (((d1 > e1 && d2 < -e1) || (d1 < -e1 && d2 > e1)) && ((d3 > e2 && d4 < -e2) || (d3 < -e2 && d4 > e2)))
    return d1 / (d1 - d2);
  // Touching or collinear cases: test endpoints against the other segment.
  auto on_segment = [eps](P2 p, P2 q, P2 r, double tol) {
    return std::abs(orient2d(p, q, r)) <= tol && std::min(p.u, q.u) - eps <= r.u && r.u <= std::max(p.u, q.u) + eps &&
           std::min(p.v, q.v) - eps <= r.v && r.v <= std::max(p.v, q.v) + eps;
  };
  if (on_segment(c, d, a, e1)) return 0.0;
  if (on_segment(c, d, b, e1)) return 1.0;
  auto param = [&](P2 r) {
    const double du = b.u - a.u, dv = b.v - a.v;
    return ((r.u - a.u) * du + (r.v - a.v) * dv) / (du * du + dv * dv);
  };
  if (on_segment(a, b, c, e2)) return param(c);
  if (on_segment(a, b, d, e2)) return param(d);
  return std::nullopt;
}

inline TriTriResult coplanar_tri_tri(const TrianglePoints& t1, const TrianglePoints& t2, const Vec3& n, double eps) {
  const int drop = dominant_axis(n);
  std::array<P2, 3> a, b;
  for (int i = 0; i < 3; ++i) {
    a[i] = project(t1[i], drop);
    b[i] = project(t2[i], drop);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (auto s = segments_intersect_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3], eps))
        return {true, t1[i] + (t1[(i + 1) % 3] - t1[i]) * std::clamp(*s, 0.0, 1.0)};
  for (int i = 0; i < 3; ++i) {
    if (point_in_triangle_2d(a[i], b, eps)) return {true, t1[i]};
    if (point_in_triangle_2d(b[i], a, eps)) return {true, t2[i]};
  }
  return {};
}

/// Segment where triangle `t` (signed plane distances `d`) meets the other
/// triangle's plane, as parameters along `dir` plus the end points.
struct LineInterval {
  double lo, hi;
  Point3 p_lo, p_hi;
};

inline LineInterval plane_cut(const TrianglePoints& t, const std::array<double, 3>& d, const Vec3& dir) {
  std::vector<Point3> pts;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) pts.push_back(t[i]);
    const int j = (i + 1) % 3;
    if ((d[i] > 0.0 && d[j] < 0.0) || (d[i] < 0.0 && d[j] > 0.0))
      pts.push_back(t[i] + (t[j] - t[i]) * (d[i] / (d[i] - d[j])));
  }
  LineInterval li{INFINITY, -INFINITY, {}, {}};
  for (const auto& p : pts) {
    const double s = dot(dir, p);
    if (s < li.lo) {
      li.lo = s;
      li.p_lo = p;
    }
    if (s > li.hi) {
      li.hi = s;
      li.p_hi = p;
    }
  }
  return li;
}

}  // namespace detail

/// Whether two closed triangles share a point, by the plane-split / interval
/// test. Plane distances within eps_length snap to zero; coplanar overlap
/// counts as intersection. The witness lies in both triangles (within eps).
/// Adjacent triangles are not filtered here.
inline TriTriResult tri_tri_intersect(const TrianglePoints& t1, const TrianglePoints& t2, const Tolerance& tol = {}) {
  const double eps = tol.eps_length;
  const Vec3 n1 = normalized(triangle_normal(t1[0], t1[1], t1[2], tol));
  const Vec3 n2 = normalized(triangle_normal(t2[0], t2[1], t2[2], tol));

  auto signed_dists = [eps](const TrianglePoints& t, const Vec3& n, const Point3& o) {
    std::array<double, 3> d{};
    for (int i = 0; i < 3; ++i) {
      d[i] = dot(n, t[i] - o);
      if (std::abs(d[i]) <= eps) d[i] = 0.0;
    }
    return d;
  };
  auto one_side = [](const std::array<double, 3>& d) {
    return (d[0] > 0 && d[1] > 0 && d[2] > 0) || (d[0] < 0 && d[1] < 0 && d[2] < 0);
  };

  const auto d1 = signed_dists(t1, n2, t2[0]);
  if (one_side(d1)) return {};
  const auto d2 = signed_dists(t2, n1, t1[0]);
  if (one_side(d2)) return {};
  if (d1[0] == 0.0 && d1[1] == 0.0 && d1[2] == 0.0) return detail::coplanar_tri_tri(t1, t2, n2, eps);

  const Vec3 c = cross(n1, n2);
  if (norm(c) <= tol.eps_angle) {
    // Planes parallel and (per the snapped distances) touching.
    return detail::coplanar_tri_tri(t1, t2, n2, eps);
  }
  const Vec3 dir = normalized(c);
  const auto i1 = detail::plane_cut(t1, d1, dir);
  const auto i2 = detail::plane_cut(t2, d2, dir);
  const double lo = std::max(i1.lo, i2.lo);
  const double hi = std::min(i1.hi, i2.hi);
  if (lo > hi + eps) return {};
  const double mid = 0.5 * (lo + hi);
  const double span = i1.hi - i1.lo;
  const double f = span > 0.0 ? std::clamp((mid - i1.lo) / span, 0.0, 1.0) : 0.0;
  return {true, i1.p_lo + (i1.p_hi - i1.p_lo) * f};
}

struct Aabb {
  Vec3 lo{INFINITY, INFINITY, INFINITY};
  Vec3 hi{-INFINITY, -INFINITY, -INFINITY};

  void expand(const Point3& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  void expand(const Aabb& b) {
    expand(b.lo);
    expand(b.hi);
  }
  Aabb padded(double e) const { return {lo - Vec3{e, e, e}, hi + Vec3{e, e, e}}; }
  bool overlaps(const Aabb& o) const {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y && lo.z <= o.hi.z && o.lo.z <= hi.z;
  }
  bool contains(const Aabb& o) const {
    return lo.x <= o.lo.x && lo.y <= o.lo.y && lo.z <= o.lo.z && hi.x >= o.hi.x && hi.y >= o.hi.y && hi.z >= o.hi.z;
  }
  Point3 center() const { return (lo + hi) * 0.5; }
};

/// Bounding-volume hierarchy over the first `count` triangles of a surface.
/// Boxes are padded by eps so that touching triangles are reported as
/// candidates.
class SpatialIndex {
 public:
  struct Node {
    Aabb box;
    int left = -1, right = -1;  ///< children, or -1 for leaves
    int begin = 0, end = 0;     ///< range into `order()` for leaves
  };

  SpatialIndex(const TriangleSurface& s, int count, double pad) {
    boxes_.resize(count);
    for (int t = 0; t < count; ++t) {
      for (const auto& p : s.triangle_points(t)) boxes_[t].expand(p);
      boxes_[t] = boxes_[t].padded(pad);
    }
    order_.resize(count);
    std::iota(order_.begin(), order_.end(), 0);
    if (count > 0) build(0, count);
  }
  SpatialIndex(const TriangleSurface& s, double pad) : SpatialIndex(s, s.num_triangles(), pad) {}

  /// Calls fn(t) for every indexed triangle whose box overlaps `query`.
  template <class Fn>
  void query(const Aabb& q, Fn&& fn) const {
    if (nodes_.empty()) return;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& n = nodes_[stack.back()];
      stack.pop_back();
      if (!n.box.overlaps(q)) continue;
      if (n.left < 0) {
        for (int i = n.begin; i < n.end; ++i)
          if (boxes_[order_[i]].overlaps(q)) fn(order_[i]);
      } else {
        stack.push_back(n.left);
        stack.push_back(n.right);
      }
    }
  }

  const Aabb& box(int t) const { return boxes_[t]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& order() const { return order_; }

 private:
  static constexpr int kLeafSize = 4;

  int build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Aabb box;
    for (int i = begin; i < end; ++i) box.expand(boxes_[order_[i]]);
    nodes_[id].box = box;
    if (end - begin <= kLeafSize) {
      nodes_[id].begin = begin;
      nodes_[id].end = end;
      return id;
    }
    const Vec3 ext = box.hi - box.lo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return boxes_[a].center()[axis] < boxes_[b].center()[axis]; });
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::vector<Aabb> boxes_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

struct IntersectionWitness {
  int triangle_a = -1;  ///< smaller triangle index
  int triangle_b = -1;
  int solid_a = -1;
  int solid_b = -1;
  SolidPath path_a;
  SolidPath path_b;
  Point3 point;
};

inline bool share_vertex(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  for (int u : a)
    for (int v : b)
      if (u == v) return true;
  return false;
}

namespace detail {

inline IntersectionWitness make_witness(const TriangleSurface& s, int a, int b, const Point3& p) {
  IntersectionWitness w;
  w.triangle_a = a;
  w.triangle_b = b;
  w.point = p;
  if (!s.triangle_solid.empty()) {
    w.solid_a = s.triangle_solid[a];
    w.solid_b = s.triangle_solid[b];
    w.path_a = s.solid_paths[w.solid_a];
    w.path_b = s.solid_paths[w.solid_b];
  }
  return w;
}

/// Lexicographically smallest intersecting pair (i, j), i < j, among pairs
/// with j in [first_new, count) and no shared vertex.
inline std::optional<IntersectionWitness> smallest_hit(const TriangleSurface& s, const SpatialIndex& index,
                                                       int first_new, int count, const Tolerance& tol) {
  std::optional<std::pair<int, int>> best;
  Point3 best_point;
  for (int j = first_new; j < count; ++j) {
    index.query(index.box(j), [&](int i) {
      if (i >= j) return;
      if (best && std::make_pair(i, j) >= *best) return;
      if (share_vertex(s.triangles[i], s.triangles[j])) return;
      const auto r = tri_tri_intersect(s.triangle_points(i), s.triangle_points(j), tol);
      if (!r.intersects) return;
      best = std::make_pair(i, j);
      best_point = *r.witness;
    });
  }
  if (!best) return std::nullopt;
  return make_witness(s, best->first, best->second, best_point);
}

}  // namespace detail

/// Smallest (by triangle index pair) intersection between triangles that
/// share no combinatorial vertex, or nullopt if the surface is embedded.
inline std::optional<IntersectionWitness> surface_self_intersects(const TriangleSurface& s,
                                                                  const Tolerance& tol = {}) {
  const SpatialIndex index(s, tol.eps_length);
  return detail::smallest_hit(s, index, 0, s.num_triangles(), tol);
}

/// All-pairs reference implementation of surface_self_intersects.
inline std::optional<IntersectionWitness> brute_force_self_intersects(const TriangleSurface& s,
                                                                      const Tolerance& tol = {}) {
  for (int i = 0; i < s.num_triangles(); ++i) {
    for (int j = i + 1; j < s.num_triangles(); ++j) {
      if (share_vertex(s.triangles[i], s.triangles[j])) continue;
      const auto r = tri_tri_intersect(s.triangle_points(i), s.triangle_points(j), tol);
      if (r.intersects) return detail::make_witness(s, i, j, *r.witness);
    }
  }
  return std::nullopt;
}

struct FirstIntersection {
  int iteration = 0;
  IntersectionWitness witness;
  /// True iff neither witness solid is an ancestor of the other in the tree.
  bool divergent_branches = false;
};

/// Smallest k <= k_max at which grow(k, c) self-intersects. Uses the prefix
/// property of grow: at round k only pairs involving a triangle added in
/// round k are tested.
inline std::optional<FirstIntersection> first_self_intersecting_iteration(int k_max, Chirality c,
                                                                          const Tolerance& tol = {}) {
  if (k_max < 1) throw std::invalid_argument("first_self_intersecting_iteration: k_max must be >= 1");
  const GrowResult g = grow(k_max, c);
  const SpatialIndex index(g.surface, tol.eps_length);
  int prev = 0;
  for (int k = 0; k <= k_max; ++k) {
    const int count = static_cast<int>(expected_growth_counts(k).triangles);
    // Triangles beyond `count` are skipped by the j-range and i < j.
    if (auto w = detail::smallest_hit(g.surface, index, prev, count, tol)) {
      FirstIntersection fi;
      fi.iteration = k;
      fi.witness = *w;
      fi.divergent_branches =
          !g.tree.is_ancestor(w->solid_a, w->solid_b) && !g.tree.is_ancestor(w->solid_b, w->solid_a);
      return fi;
    }
    prev = count;
  }
  return std::nullopt;
}

}  // namespace klein37
