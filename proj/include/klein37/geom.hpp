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
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

namespace klein37 {

/// Thrown when input geometry is degenerate (zero-area triangle, zero vector).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr bool operator==(const Vec3&) const = default;
};

using Point3 = Vec3;
using Vector3 = Vec3;

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Tolerance policy shared by every module.
///
/// `eps_length` bounds length and coordinate comparisons. `eps_angle` is the
/// angular threshold (radians) for asserting two directions are equal.
/// `coarse_angle_deg` is used only when asserting that two directions are
/// NOT parallel, so that a real non-parallel pair cannot pass by rounding.
struct Tolerance {
  double eps_length = 1e-9;
  double eps_angle = 1e-9;
  double coarse_angle_deg = 1.0;
};

/// Name of the environment variable that overrides `Tolerance::eps_length`.
inline constexpr const char* kToleranceEnvVar = "KLEIN37_EPS";

/// Default tolerance, with `eps_length` taken from KLEIN37_EPS when set to a
/// positive number below 1e-3.
inline Tolerance default_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv(kToleranceEnvVar)) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && v < 1e-3) tol.eps_length = v;
  }
  return tol;
}

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static constexpr Mat3 identity() { return {{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}}; }
  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return {{{{c0.x, c1.x, c2.x}, {c0.y, c1.y, c2.y}, {c0.z, c1.z, c2.z}}}};
  }
  static constexpr Mat3 diagonal(double a, double b, double c) {
    return {{{{a, 0, 0}, {0, b, 0}, {0, 0, c}}}};
  }

  constexpr Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  constexpr Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
    return r;
  }
  constexpr Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  constexpr Vec3 column(int j) const { return {m[0][j], m[1][j], m[2][j]}; }
  constexpr double determinant() const {
    return dot(column(0), cross(column(1), column(2)));
  }
  constexpr bool operator==(const Mat3&) const = default;
};

/// p -> rotation * p + translation. `rotation` is orthogonal; a negative
/// determinant marks a reflection, which only `reflection()` produces.
struct RigidMotion {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  static constexpr RigidMotion identity() { return {}; }

  constexpr Point3 apply(const Point3& p) const { return rotation * p + translation; }
  constexpr Vector3 apply_vector(const Vector3& v) const { return rotation * v; }
  constexpr bool is_reflection() const { return rotation.determinant() < 0.0; }
  constexpr bool operator==(const RigidMotion&) const = default;
};

/// apply(compose(a, b), p) == apply(a, apply(b, p)).
constexpr RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

constexpr RigidMotion inverse(const RigidMotion& m) {
  const Mat3 rt = m.rotation.transposed();
  return {rt, -(rt * m.translation)};
}

/// Rotation by `angle_degrees` about the axis through `center` with
/// direction `axis` (right-hand rule).
inline RigidMotion rotate_about(const Point3& center, const Vector3& axis, double angle_degrees) {
  const Vec3 k = normalized(axis);
  const double a = angle_degrees * std::numbers::pi / 180.0;
  const double c = std::cos(a);
  const double s = std::sin(a);
  const double t = 1.0 - c;
  Mat3 r{{{{t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y},
           {t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x},
           {t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c}}}};
  return {r, center - r * center};
}

inline RigidMotion rotate_z(double angle_degrees) {
  return rotate_about({0, 0, 0}, {0, 0, 1}, angle_degrees);
}

/// Reflection across the plane through `point` with normal `normal`.
inline RigidMotion reflection(const Point3& point, const Vector3& normal) {
  const Vec3 n = normalized(normal);
  Mat3 r = Mat3::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] -= 2.0 * n[i] * n[j];
  return {r, point - r * point};
}

/// Largest entry of |a.rotation - b.rotation| and |a.translation - b.translation|.
inline double max_deviation(const RigidMotion& a, const RigidMotion& b) {
  double dev = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      dev = std::max(dev, std::abs(a.rotation.m[i][j] - b.rotation.m[i][j]));
    dev = std::max(dev, std::abs(a.translation[i] - b.translation[i]));
  }
  return dev;
}

/// Largest entry of |R^T R - I|.
inline double orthonormality_error(const Mat3& r) {
  const Mat3 g = r.transposed() * r;
  double dev = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dev = std::max(dev, std::abs(g.m[i][j] - (i == j ? 1.0 : 0.0)));
  return dev;
}

/// Unnormalized normal (p2 - p1) x (p3 - p1); its norm is twice the area.
inline Vector3 triangle_normal(const Point3& p1, const Point3& p2, const Point3& p3,
                               const Tolerance& tol = {}) {
  const Vec3 n = cross(p2 - p1, p3 - p1);
  if (0.5 * norm(n) <= tol.eps_length)
    throw GeometryError("degenerate triangle: area below tolerance");
  return n;
}

/// Angle between two nonzero vectors, in degrees within [0, 180].
inline double angle_between_deg(const Vector3& u, const Vector3& v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw GeometryError("angle with zero vector");
  // atan2 keeps precision near 0 and 180 degrees.
  return std::atan2(norm(cross(u, v)), dot(u, v)) * 180.0 / std::numbers::pi;
}

/// Angle between the lines spanned by u and v, in degrees within [0, 90].
inline double line_angle_deg(const Vector3& u, const Vector3& v) {
  const double a = angle_between_deg(u, v);
  return std::min(a, 180.0 - a);
}

/// True iff |u x v| <= eps_angle * |u| * |v|, i.e. u and v span the same line.
inline bool are_parallel(const Vector3& u, const Vector3& v, const Tolerance& tol = {}) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu <= tol.eps_length || nv <= tol.eps_length)
    throw GeometryError("are_parallel: zero vector");
  return norm(cross(u, v)) <= tol.eps_angle * nu * nv;
}

/// Signed volume of the tetrahedron (a, b, c, d), times six.
inline double orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return dot(b - a, cross(c - a, d - a));
}

/// Motion carrying the frame of (a0, a1, a2) onto the frame of (b0, b1, b2).
/// The triangles must be congruent and non-degenerate; the result is proper
/// (no reflection).
inline RigidMotion align_triangles(const std::array<Point3, 3>& a,
                                   const std::array<Point3, 3>& b) {
  auto frame = [](const std::array<Point3, 3>& p) {
    const Vec3 e0 = normalized(p[1] - p[0]);
    const Vec3 e2 = normalized(cross(p[1] - p[0], p[2] - p[0]));
    const Vec3 e1 = cross(e2, e0);
    return Mat3::from_columns(e0, e1, e2);
  };
  const Mat3 fa = frame(a);
  const Mat3 fb = frame(b);
  const Mat3 r = fb * fa.transposed();
  return {r, b[0] - r * a[0]};
}

}  // namespace klein37
