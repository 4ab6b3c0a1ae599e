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
#include <string>
#include <vector>

#include "klein37/geom.hpp"

namespace klein37 {

enum class SolidKind : std::uint8_t { Prism, Antiprism };

inline const char* to_string(SolidKind k) { return k == SolidKind::Prism ? "prism" : "antiprism"; }

/// Sequence of slot choices from the root prism. Each antiprism appends the
/// prism slot (0, 1, 2) it hangs from; a prism shares its parent's path.
using SolidPath = std::vector<std::uint8_t>;

/// Half the distance between the two squares of the canonical antiprism,
/// 8^(-1/4). This is the only height at which the side triangles are
/// equilateral with edge sqrt(2).
inline double antiprism_half_height() { return std::pow(8.0, -0.25); }

/// Distance from the prism's glued square to its apex edge, sqrt(3/2).
inline double prism_apex_offset() { return std::sqrt(1.5); }

inline constexpr double kEdgeLength = std::numbers::sqrt2;

/// A convex solid: triangles and squares wound counter-clockwise seen from
/// outside. Square vertices are stored cyclically.
struct Solid {
  SolidKind kind = SolidKind::Prism;
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 4>> squares;
  SolidPath provenance;

  Point3 centroid() const {
    Vec3 c{};
    for (const auto& v : vertices) c += v;
    return c / static_cast<double>(vertices.size());
  }
};

/// Square antiprism with squares at x = -h and x = +h.
///
/// Vertices 0..3 form the square at x = +h, (h, +-sqrt2/2, +-sqrt2/2);
/// vertices 4..7 form the square at x = -h, (-h, 0, +-1) and (-h, +-1, 0).
/// Square 0 is the x = +h square (glued to a prism slot), square 1 the
/// x = -h square. The default `h` gives equilateral sides; other values are
/// accepted so that regularity checks can be exercised.
inline Solid canonical_antiprism(double h = antiprism_half_height()) {
  const double s = std::numbers::sqrt2 / 2.0;
  Solid a;
  a.kind = SolidKind::Antiprism;
  a.vertices = {{h, s, s},   {h, -s, s},  {h, -s, -s}, {h, s, -s},
                {-h, 0, 1},  {-h, -1, 0}, {-h, 0, -1}, {-h, 1, 0}};
  a.triangles = {{4, 1, 0}, {0, 3, 7}, {7, 4, 0}, {5, 2, 1},
                 {1, 4, 5}, {6, 3, 2}, {2, 5, 6}, {3, 6, 7}};
  a.squares = {{0, 1, 2, 3}, {7, 6, 5, 4}};
  return a;
}

/// Triangular prism sharing the antiprism's x = +h square.
///
/// Vertices 0..3 are that square (same order as the antiprism's 0..3),
/// 4 = (h + sqrt(3/2), 0, +sqrt2/2) and 5 = (h + sqrt(3/2), 0, -sqrt2/2) are
/// the apex edge. Triangle 0 lies in z = +sqrt2/2, triangle 1 in z = -sqrt2/2.
/// Square `j` is the image of square 0 under the order-3 rotation about the
/// prism axis applied j times.
inline Solid canonical_prism(double h = antiprism_half_height()) {
  const double s = std::numbers::sqrt2 / 2.0;
  const double ax = h + prism_apex_offset();
  Solid p;
  p.kind = SolidKind::Prism;
  p.vertices = {{h, s, s}, {h, -s, s}, {h, -s, -s}, {h, s, -s}, {ax, 0, s}, {ax, 0, -s}};
  p.triangles = {{0, 1, 4}, {5, 2, 3}};
  p.squares = {{3, 2, 1, 0}, {1, 2, 5, 4}, {3, 0, 4, 5}};
  return p;
}

/// Point on the prism's three-fold axis at z = 0 (centroid of its triangles
/// projected to z = 0).
inline Point3 prism_axis_point(double h = antiprism_half_height()) {
  return {h + prism_apex_offset() / 3.0, 0.0, 0.0};
}

/// Order-3 rotation of the canonical prism onto itself (120 degrees about its
/// axis, which is parallel to z).
inline RigidMotion prism_slot_rotation() {
  return rotate_about(prism_axis_point(), {0, 0, 1}, 120.0);
}

struct FaceRegularity {
  bool is_square = false;
  int index = 0;
  double max_edge_deviation = 0.0;  ///< max | |edge| - sqrt2 |
  double planarity_deviation = 0.0;  ///< squares: distance of 4th vertex from plane of first 3
  double right_angle_deviation = 0.0;  ///< squares: max |cos| of corner angles
};

struct RegularityReport {
  std::vector<FaceRegularity> faces;
  bool pass = true;
};

/// Checks every face of `s`: edges sqrt(2), squares planar with right angles.
inline RegularityReport check_regular(const Solid& s, const Tolerance& tol = {}) {
  RegularityReport r;
  auto edge_dev = [&](int a, int b) {
    return std::abs(distance(s.vertices[a], s.vertices[b]) - kEdgeLength);
  };
  for (int i = 0; i < static_cast<int>(s.triangles.size()); ++i) {
    const auto& t = s.triangles[i];
    FaceRegularity f;
    f.index = i;
    for (int e = 0; e < 3; ++e)
      f.max_edge_deviation = std::max(f.max_edge_deviation, edge_dev(t[e], t[(e + 1) % 3]));
    r.faces.push_back(f);
  }
  for (int i = 0; i < static_cast<int>(s.squares.size()); ++i) {
    const auto& q = s.squares[i];
    FaceRegularity f;
    f.is_square = true;
    f.index = i;
    const auto& v = s.vertices;
    for (int e = 0; e < 4; ++e) {
      f.max_edge_deviation = std::max(f.max_edge_deviation, edge_dev(q[e], q[(e + 1) % 4]));
      const Vec3 u = v[q[(e + 1) % 4]] - v[q[e]];
      const Vec3 w = v[q[(e + 3) % 4]] - v[q[e]];
      f.right_angle_deviation = std::max(f.right_angle_deviation, std::abs(dot(u, w)) / (norm(u) * norm(w)));
    }
    const Vec3 n = normalized(cross(v[q[1]] - v[q[0]], v[q[2]] - v[q[0]]));
    f.planarity_deviation = std::abs(dot(n, v[q[3]] - v[q[0]]));
    r.faces.push_back(f);
  }
  for (const auto& f : r.faces) {
    if (f.max_edge_deviation > tol.eps_length || f.planarity_deviation > tol.eps_length ||
        f.right_angle_deviation > tol.eps_length)
      r.pass = false;
  }
  return r;
}

/// Residuals of the three sphere equations locating the apex of the prism
/// glued to the antiprism's x = -h square:
///   (x+h)^2 + y^2 + (z-1)^2 = 2
///   (x+h)^2 + (y+1)^2 + z^2 = 2
///   (x-h)^2 + (y+1/sqrt2)^2 + (z-1/sqrt2)^2 = (2h+sqrt(3/2))^2 + (1-1/sqrt2)^2
inline std::array<double, 3> apex_equation_residuals(const Point3& p) {
  const double h = antiprism_half_height();
  const double r2 = 1.0 / std::numbers::sqrt2;
  const double rhs3 = std::pow(2.0 * h + prism_apex_offset(), 2) + std::pow(1.0 - r2, 2);
  return {std::pow(p.x + h, 2) + p.y * p.y + std::pow(p.z - 1.0, 2) - 2.0,
          std::pow(p.x + h, 2) + std::pow(p.y + 1.0, 2) + p.z * p.z - 2.0,
          std::pow(p.x - h, 2) + std::pow(p.y + r2, 2) + std::pow(p.z - r2, 2) - rhs3};
}

/// x-coordinate of the apex solving the system above with y = -1/2, z = 1/2.
///
/// The first equation reduces to (x+h)^2 = 3/2; of its two roots the one
/// satisfying the remaining equations is returned (it is -h - sqrt(3/2)).
inline double solve_d() {
  const double h = antiprism_half_height();
  const double y = -0.5;
  const double z = 0.5;
  const double root = std::sqrt(2.0 - y * y - (z - 1.0) * (z - 1.0));
  double best = 0.0;
  double best_residual = INFINITY;
  for (double x : {-h - root, -h + root}) {
    const auto r = apex_equation_residuals({x, y, z});
    const double res = std::abs(r[1]) + std::abs(r[2]);
    if (res < best_residual) {
      best_residual = res;
      best = x;
    }
  }
  return best;
}

/// Transforms every vertex of `s` by `m`. Reflections reverse face winding
/// so that faces stay outward-oriented.
inline Solid transformed(const Solid& s, const RigidMotion& m) {
  Solid out = s;
  for (auto& v : out.vertices) v = m.apply(v);
  if (m.is_reflection()) {
    for (auto& t : out.triangles) std::swap(t[1], t[2]);
    for (auto& q : out.squares) std::swap(q[1], q[3]);
  }
  return out;
}

}  // namespace klein37
