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
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "klein37/assembly.hpp"
#include "klein37/geom.hpp"
#include "klein37/petrie.hpp"
#include "klein37/solids.hpp"
#include "klein37/surface.hpp"

namespace klein37 {

/// Which dangling antiprism square is identified with E: F sits on the
/// dangling antiprism hosted by the outer prism E'' lives on. This is the
/// only cyclic pairing for which some correspondence closes the piece into
/// a {3,7} surface with all Petrie polygons of length 8.
inline constexpr int kPairingOffset = 2;

inline constexpr std::array<const char*, 6> kSquareLabels{"E", "E'", "E''", "F", "F'", "F''"};

struct BoundarySquare {
  std::string label;
  int solid = -1;
  int square = -1;                 ///< local square index in the solid
  std::array<int, 4> vertex_ids{};  ///< outward cyclic order
  std::array<Point3, 4> points{};

  /// Outward (non-unit) normal.
  Vector3 normal() const { return cross(points[1] - points[0], points[2] - points[0]); }
  Point3 center() const { return (points[0] + points[1] + points[2] + points[3]) * 0.25; }
};

/// The 56-triangle piece: root prism, its three antiprisms, the three outer
/// prisms, and one dangling antiprism on each outer prism.
struct FundamentalPiece {
  Chirality chirality = Chirality::Right;
  int pairing_offset = kPairingOffset;
  DecorationTree tree;
  TriangleSurface surface;
  /// E, E', E'', F, F', F'' in that order; E(i) pairs with F(i).
  std::array<BoundarySquare, 6> squares;
  /// Order-3 rotation about the root prism's axis, mapping E -> E' -> E''.
  RigidMotion symmetry;

  const BoundarySquare& square(const std::string& label) const {
    for (const auto& s : squares)
      if (s.label == label) return s;
    throw std::out_of_range("no boundary square " + label);
  }
};

/// Slot of each outer prism that carries the dangling antiprism. The other
/// free slot (2) is the E-type boundary square.
inline constexpr int kDanglingSlot = 1;
inline constexpr int kOpenSlot = 2;

inline FundamentalPiece build_fundamental_piece(Chirality c, int pairing_offset = kPairingOffset) {
  Assembler as(c);
  std::array<int, 3> antis{}, outer{}, dangling{};
  for (int j = 0; j < 3; ++j) antis[j] = as.attach_antiprism(0, j, 1);
  for (int j = 0; j < 3; ++j) outer[j] = as.attach_prism(antis[j], 1);
  for (int j = 0; j < 3; ++j) dangling[j] = as.attach_antiprism(outer[j], kDanglingSlot, 2);
  as.set_iterations(2);

  FundamentalPiece piece;
  piece.chirality = c;
  piece.pairing_offset = ((pairing_offset % 3) + 3) % 3;
  piece.tree = as.take_tree();
  piece.surface = as.take_surface();
  piece.symmetry = prism_slot_rotation();

  auto make = [&](const std::string& label, int solid, int square) {
    const PlacedSolid& ps = piece.tree.solids[solid];
    const Solid& canon = DecorationTree::canonical(ps.kind);
    BoundarySquare b;
    b.label = label;
    b.solid = solid;
    b.square = square;
    for (int k = 0; k < 4; ++k) {
      b.vertex_ids[k] = ps.vertex_ids[canon.squares[square][k]];
      b.points[k] = piece.surface.vertices[b.vertex_ids[k]];
    }
    return b;
  };
  for (int i = 0; i < 3; ++i) {
    piece.squares[i] = make(kSquareLabels[i], outer[i], kOpenSlot);
    piece.squares[3 + i] = make(kSquareLabels[3 + i], dangling[(i + piece.pairing_offset) % 3], 1);
  }
  return piece;
}

/// E vertex k is glued to F vertex (rotation + (flipped ? -k : k)) mod 4.
struct SquareCorrespondence {
  int rotation = 0;
  bool flipped = false;

  int f_index(int k) const { return (((rotation + (flipped ? -k : k)) % 4) + 4) % 4; }
  bool operator==(const SquareCorrespondence&) const = default;
};

/// The closed surface obtained by gluing E to F, E' to F', E'' to F''.
/// Triangle t of the quotient is triangle t of the piece.
struct QuotientSurface {
  TriangleSurface surface;
  std::vector<int> piece_vertex;  ///< piece vertex -> quotient vertex
  SquareCorrespondence correspondence;
  int pairing_offset = kPairingOffset;
  /// Each triangle's corners in the piece's geometry (F-side triangles keep
  /// their own positions; only E-side positions survive in `surface`).
  std::vector<std::array<Point3, 3>> face_points;
};

struct IdentificationCandidate {
  int pairing_offset = 0;
  SquareCorrespondence correspondence;
  bool manifold = false;
  bool closed = false;
  bool oriented = false;
  bool all_degree_seven = false;
  bool petrie_eight = false;
  bool valid() const { return manifold && closed && oriented && all_degree_seven && petrie_eight; }
};

namespace detail {

/// Glues the squares of `piece` with correspondence `corr`; vertices are
/// renumbered compactly in increasing piece order.
inline QuotientSurface glue_squares(const FundamentalPiece& piece, SquareCorrespondence corr) {
  const int nv = piece.surface.num_vertices();
  std::vector<int> target(nv);
  for (int v = 0; v < nv; ++v) target[v] = v;
  for (int i = 0; i < 3; ++i) {
    const auto& e = piece.squares[i];
    const auto& f = piece.squares[3 + i];
    for (int k = 0; k < 4; ++k) target[f.vertex_ids[corr.f_index(k)]] = e.vertex_ids[k];
  }
  QuotientSurface q;
  q.correspondence = corr;
  q.pairing_offset = piece.pairing_offset;
  q.piece_vertex.assign(nv, -1);
  std::vector<int> compact(nv, -1);
  for (int v = 0; v < nv; ++v) {
    const int t = target[v];
    if (compact[t] < 0) {
      compact[t] = q.surface.num_vertices();
      q.surface.vertices.push_back(piece.surface.vertices[t]);
    }
    q.piece_vertex[v] = compact[t];
  }
  for (int t = 0; t < piece.surface.num_triangles(); ++t) {
    const auto& tri = piece.surface.triangles[t];
    q.surface.triangles.push_back({q.piece_vertex[tri[0]], q.piece_vertex[tri[1]], q.piece_vertex[tri[2]]});
    q.face_points.push_back(piece.surface.triangle_points(t));
  }
  q.surface.triangle_solid = piece.surface.triangle_solid;
  q.surface.solid_paths = piece.surface.solid_paths;
  return q;
}

inline IdentificationCandidate evaluate(const FundamentalPiece& piece, SquareCorrespondence corr) {
  IdentificationCandidate c;
  c.pairing_offset = piece.pairing_offset;
  c.correspondence = corr;
  const QuotientSurface q = glue_squares(piece, corr);
  try {
    const AdjacencyIndex adj(q.surface);
    c.manifold = true;
    c.closed = is_closed(adj);
    c.oriented = c.closed && is_oriented(q.surface, adj);
    const auto deg = vertex_degrees(q.surface, adj);
    c.all_degree_seven = std::all_of(deg.degree.begin(), deg.degree.end(), [](int d) { return d == 7; });
    if (c.closed && c.oriented) {
      const auto census = petrie_census(adj, 64);
      c.petrie_eight = census.exceeded == 0 && census.period_histogram.size() == 1 &&
                       census.period_histogram.begin()->first == 8;
    }
  } catch (const TopologyError&) {
    c.manifold = false;
  }
  return c;
}

inline std::vector<SquareCorrespondence> all_square_correspondences() {
  std::vector<SquareCorrespondence> out;
  for (int r = 0; r < 4; ++r)
    for (bool f : {false, true}) out.push_back({r, f});
  return out;
}

}  // namespace detail

/// Evaluates the 8 square correspondences (4 rotations x 2 flips) for the
/// piece's pairing, or for all three cyclic pairings when `all_pairings`.
inline std::vector<IdentificationCandidate> candidate_identifications(const FundamentalPiece& piece,
                                                                      bool all_pairings = false) {
  std::vector<IdentificationCandidate> out;
  const int first = all_pairings ? 0 : piece.pairing_offset;
  const int last = all_pairings ? 2 : piece.pairing_offset;
  for (int offset = first; offset <= last; ++offset) {
    FundamentalPiece p = offset == piece.pairing_offset ? piece : build_fundamental_piece(piece.chirality, offset);
    for (auto corr : detail::all_square_correspondences()) out.push_back(detail::evaluate(p, corr));
  }
  return out;
}

/// Glues E/F, E'/F', E''/F'' with the unique correspondence that yields a
/// closed oriented surface with every vertex of degree 7 and every Petrie
/// polygon of length 8. Throws TopologyError when no (or more than one)
/// correspondence qualifies.
inline QuotientSurface identify(const FundamentalPiece& piece) {
  std::vector<SquareCorrespondence> good;
  for (const auto& c : candidate_identifications(piece))
    if (c.valid()) good.push_back(c.correspondence);
  if (good.empty())
    throw TopologyError("identification failed: no square correspondence closes the piece into a {3,7} surface"
                        " with Petrie period 8 (pairing offset " +
                        std::to_string(piece.pairing_offset) + ")");
  if (good.size() > 1) throw TopologyError("identification is ambiguous");
  return detail::glue_squares(piece, good.front());
}

inline int genus(const QuotientSurface& q) { return genus(q.surface); }

struct SquarePairAngle {
  std::string e_label, f_label;
  Vector3 e_normal, f_normal;
  double line_angle_deg = 0.0;      ///< angle between the normal lines, in [0, 90]
  double oriented_angle_deg = 0.0;  ///< angle between outward normals, in [0, 180]
  bool non_parallel = false;        ///< line angle above the coarse threshold
};

struct NonEmbeddabilityReport {
  std::array<SquarePairAngle, 3> pairs;
  bool all_non_parallel = false;
  double max_angle_spread_deg = 0.0;  ///< max |angle_i - angle_0|
  bool symmetric = false;             ///< spread within eps_angle (in degrees)
  bool symmetry_maps_e_normals = false;
  /// Rotation (120 or 240 degrees about the root axis) carrying F's normal
  /// to F''s normal, or 0 if neither does.
  int f_to_f_prime_rotation_deg = 0;
  bool pass() const { return all_non_parallel && symmetric && symmetry_maps_e_normals; }
};

inline NonEmbeddabilityReport verify_nonembeddability(const FundamentalPiece& p, const Tolerance& tol = {}) {
  NonEmbeddabilityReport r;
  r.all_non_parallel = true;
  for (int i = 0; i < 3; ++i) {
    const auto& e = p.squares[i];
    const auto& f = p.squares[3 + i];
    SquarePairAngle a;
    a.e_label = e.label;
    a.f_label = f.label;
    a.e_normal = e.normal();
    a.f_normal = f.normal();
    a.line_angle_deg = line_angle_deg(a.e_normal, a.f_normal);
    a.oriented_angle_deg = angle_between_deg(a.e_normal, a.f_normal);
    a.non_parallel = a.line_angle_deg > tol.coarse_angle_deg && !are_parallel(a.e_normal, a.f_normal, tol);
    r.all_non_parallel = r.all_non_parallel && a.non_parallel;
    r.pairs[i] = a;
  }
  for (const auto& a : r.pairs)
    r.max_angle_spread_deg = std::max(r.max_angle_spread_deg, std::abs(a.line_angle_deg - r.pairs[0].line_angle_deg));
  r.symmetric = r.max_angle_spread_deg <= tol.eps_angle * 180.0 / std::numbers::pi;
  r.symmetry_maps_e_normals = true;
  for (int i = 0; i < 3; ++i) {
    const Vector3 img = p.symmetry.apply_vector(p.squares[i].normal());
    const Vector3 next = p.squares[(i + 1) % 3].normal();
    if (norm(img - next) > tol.eps_length * norm(next)) r.symmetry_maps_e_normals = false;
  }
  const Vector3 nf = p.squares[3].normal();
  const Vector3 nf1 = p.squares[4].normal();
  for (int deg : {120, 240}) {
    const RigidMotion m = rotate_about(prism_axis_point(), {0, 0, 1}, deg);
    if (norm(m.apply_vector(nf) - nf1) <= 1e-9 * norm(nf1)) r.f_to_f_prime_rotation_deg = deg;
  }
  return r;
}

/// Index of the triangle whose corners are `pts` (any order), or -1.
inline int find_triangle(const TriangleSurface& s, const std::array<Point3, 3>& pts, double eps = 1e-9) {
  for (int t = 0; t < s.num_triangles(); ++t) {
    const auto q = s.triangle_points(t);
    bool all = true;
    for (const auto& p : pts) {
      bool hit = false;
      for (const auto& x : q) hit = hit || distance(p, x) <= eps;
      all = all && hit;
    }
    if (all) return t;
  }
  return -1;
}

/// Normals of the labelled triangles A, B, C, D located by their corner
/// coordinates in the piece (Right chirality coordinates), each computed
/// with the listed corner order.
struct LabeledTriangle {
  std::string label;
  std::array<Point3, 3> corners;
  int triangle = -1;
  Vector3 normal;
};

inline std::vector<LabeledTriangle> labeled_triangles(const FundamentalPiece& p) {
  const double h = antiprism_half_height();
  const double s = std::numbers::sqrt2 / 2.0;
  const double d = solve_d();
  std::vector<LabeledTriangle> out{
      {"A", {{{h, s, s}, {h, -s, s}, {h + prism_apex_offset(), 0, s}}}, -1, {}},
      {"B", {{{h, s, s}, {h, -s, s}, {-h, 0, 1}}}, -1, {}},
      {"C", {{{h, -s, s}, {-h, 0, 1}, {-h, -1, 0}}}, -1, {}},
      {"D", {{{-h, -1, 0}, {-h, 0, 1}, {d, -0.5, 0.5}}}, -1, {}},
  };
  for (auto& lt : out) {
    lt.triangle = find_triangle(p.surface, lt.corners);
    lt.normal = triangle_normal(lt.corners[0], lt.corners[1], lt.corners[2]);
  }
  return out;
}

/// Thrown when label propagation reaches a triangle or vertex twice with
/// different quotient images.
class CoveringError : public TopologyError {
 public:
  using TopologyError::TopologyError;
};

struct CoveringLabel {
  std::vector<int> triangle_label;  ///< surface triangle -> quotient triangle
  std::vector<int> vertex_image;    ///< surface vertex -> quotient vertex
  int interior_vertices_checked = 0;
  std::map<int, int> label_histogram;  ///< quotient triangle -> preimage count
};

/// Labels every triangle of a grown surface by a quotient triangle, seeding
/// the root prism's two triangles with their own images and propagating
/// across interior edges through the quotient's adjacency. Then checks that
/// the fan around every interior vertex maps bijectively, in cyclic order,
/// onto the fan around its image. Throws CoveringError on any inconsistency.
inline CoveringLabel covering_label(const TriangleSurface& s, const QuotientSurface& q) {
  const AdjacencyIndex sadj(s);
  const AdjacencyIndex qadj(q.surface);
  CoveringLabel cl;
  cl.triangle_label.assign(s.num_triangles(), -1);
  cl.vertex_image.assign(s.num_vertices(), -1);

  auto bind_vertex = [&](int v, int img) {
    if (cl.vertex_image[v] >= 0 && cl.vertex_image[v] != img)
      throw CoveringError("covering: vertex " + std::to_string(v) + " reached with two images");
    cl.vertex_image[v] = img;
  };

  std::deque<int> queue;
  for (int t : {0, 1}) {
    if (t >= s.num_triangles()) break;
    cl.triangle_label[t] = t;
    for (int k = 0; k < 3; ++k) bind_vertex(s.triangles[t][k], q.surface.triangles[t][k]);
    queue.push_back(t);
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    const int qt = cl.triangle_label[t];
    for (int e = 0; e < 3; ++e) {
      const HalfEdge o = sadj.opposite(t, e);
      if (!o.valid()) continue;
      const int a = s.triangles[t][e];
      const int b = s.triangles[t][(e + 1) % 3];
      const int qe = qadj.local_edge(qt, cl.vertex_image[a], cl.vertex_image[b]);
      if (qe < 0) throw CoveringError("covering: edge image missing from quotient triangle");
      const HalfEdge qo = qadj.opposite(qt, qe);
      if (!qo.valid()) throw CoveringError("covering: quotient edge on boundary");
      const int n = o.triangle;
      const int x = s.triangles[n][(o.edge + 2) % 3];
      const int qx = q.surface.triangles[qo.triangle][(qo.edge + 2) % 3];
      if (cl.triangle_label[n] >= 0) {
        if (cl.triangle_label[n] != qo.triangle || cl.vertex_image[x] != qx)
          throw CoveringError("covering: triangle " + std::to_string(n) + " reached with two labels");
        continue;
      }
      cl.triangle_label[n] = qo.triangle;
      bind_vertex(x, qx);
      queue.push_back(n);
    }
  }
  for (int t = 0; t < s.num_triangles(); ++t) {
    if (cl.triangle_label[t] < 0) throw CoveringError("covering: triangle " + std::to_string(t) + " unreachable");
    ++cl.label_histogram[cl.triangle_label[t]];
  }

  // Link check: the closed fan around each interior vertex maps onto the
  // image vertex's fan, element by element.
  std::vector<int> first_triangle(s.num_vertices(), -1);
  for (int t = 0; t < s.num_triangles(); ++t)
    for (int v : s.triangles[t])
      if (first_triangle[v] < 0) first_triangle[v] = t;
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (first_triangle[v] < 0) continue;
    bool closed = false;
    const auto fan = vertex_fan(sadj, first_triangle[v], v, &closed);
    if (!closed) continue;
    bool qclosed = false;
    const auto qfan = vertex_fan(qadj, cl.triangle_label[fan.front()], cl.vertex_image[v], &qclosed);
    if (!qclosed || qfan.size() != fan.size())
      throw CoveringError("covering: link of vertex " + std::to_string(v) + " has wrong size");
    for (std::size_t i = 0; i < fan.size(); ++i)
      if (cl.triangle_label[fan[i]] != qfan[i])
        throw CoveringError("covering: link of vertex " + std::to_string(v) + " is not mapped bijectively");
    ++cl.interior_vertices_checked;
  }
  return cl;
}

/// Segments of the Petrie walk from `start`, each drawn inside the face it
/// crosses using the face's own corner positions: from the entry-edge
/// midpoint to the exit-edge midpoint.
inline std::vector<std::array<Point3, 2>> petrie_segments(const AdjacencyIndex& adj, const PetrieState& start,
                                                          const std::vector<std::array<Point3, 3>>& face_points,
                                                          int max_steps = 64) {
  std::vector<std::array<Point3, 2>> segs;
  PetrieState st = start;
  for (int n = 0; n < max_steps; ++n) {
    const auto& fp = face_points[st.face];
    const int e_in = st.entry;
    const int e_out = exit_edge(st);
    segs.push_back({(fp[e_in] + fp[(e_in + 1) % 3]) * 0.5, (fp[e_out] + fp[(e_out + 1) % 3]) * 0.5});
    st = petrie_step(adj, st);
    if (st == start) break;
  }
  return segs;
}

}  // namespace klein37
