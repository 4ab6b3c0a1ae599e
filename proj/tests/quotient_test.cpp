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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "klein37/io.hpp"
#include "klein37/klein37.hpp"
#include "klein37/quotient.hpp"

namespace {

using namespace klein37;

constexpr double kEps = 1e-9;

bool SamePointSet(const std::array<Point3, 4>& a, const std::array<Point3, 4>& b, double eps = kEps) {
  for (const auto& p : a) {
    bool hit = false;
    for (const auto& q : b) hit = hit || distance(p, q) <= eps;
    if (!hit) return false;
  }
  return true;
}

class PieceTest : public ::testing::TestWithParam<Chirality> {};

TEST_P(PieceTest, Composition) {
  const auto piece = build_fundamental_piece(GetParam());
  EXPECT_EQ(piece.surface.num_triangles(), 56);
  EXPECT_EQ(piece.tree.count(SolidKind::Prism), 4);
  EXPECT_EQ(piece.tree.count(SolidKind::Antiprism), 6);
  EXPECT_EQ(2 * 4 + 8 * 6, 56);
  EXPECT_TRUE(is_oriented(piece.surface));
}

TEST_P(PieceTest, SymmetryCyclesTheSquares) {
  const auto piece = build_fundamental_piece(GetParam());
  for (int base : {0, 3}) {
    for (int i = 0; i < 3; ++i) {
      std::array<Point3, 4> img;
      for (int k = 0; k < 4; ++k) img[k] = piece.symmetry.apply(piece.squares[base + i].points[k]);
      EXPECT_TRUE(SamePointSet(img, piece.squares[base + (i + 1) % 3].points)) << base + i;
    }
  }
}

TEST_P(PieceTest, BoundaryIsSixSquares) {
  const auto piece = build_fundamental_piece(GetParam());
  const auto loops = boundary_loops(piece.surface);
  ASSERT_EQ(loops.size(), 6u);
  std::set<std::set<int>> loop_sets, square_sets;
  for (const auto& l : loops) {
    EXPECT_EQ(l.size(), 4u);
    loop_sets.insert({l.vertices.begin(), l.vertices.end()});
  }
  for (const auto& sq : piece.squares) square_sets.insert({sq.vertex_ids.begin(), sq.vertex_ids.end()});
  EXPECT_EQ(loop_sets, square_sets);
}

TEST_P(PieceTest, PieceIsEmbedded) {
  const auto piece = build_fundamental_piece(GetParam());
  EXPECT_FALSE(brute_force_self_intersects(piece.surface).has_value());
}

TEST_P(PieceTest, IdentificationClosesGenusThree) {
  const auto q = identify(build_fundamental_piece(GetParam()));
  const AdjacencyIndex adj(q.surface);
  const auto c = simplex_counts(q.surface, adj);
  EXPECT_EQ(c.vertices, 24);
  EXPECT_EQ(c.edges, 84);
  EXPECT_EQ(c.faces, 56);
  EXPECT_EQ(c.euler(), -4);
  EXPECT_TRUE(is_closed(adj));
  EXPECT_TRUE(is_oriented(q.surface, adj));
  EXPECT_EQ(genus(q), 3);
  EXPECT_TRUE(boundary_loops(q.surface, adj).empty());
  const auto deg = vertex_degrees(q.surface, adj);
  ASSERT_EQ(deg.degree.size(), 24u);
  for (int d : deg.degree) EXPECT_EQ(d, 7);
  // {3,7} closed-surface counting: E = 3F/2, V = 3F/7.
  EXPECT_EQ(c.faces % 14, 0);
  EXPECT_EQ(2 * c.edges, 3 * c.faces);
  EXPECT_EQ(7 * c.vertices, 3 * c.faces);
}

TEST_P(PieceTest, CorrespondenceIsUnique) {
  const auto piece = build_fundamental_piece(GetParam());
  const auto all = candidate_identifications(piece, true);
  ASSERT_EQ(all.size(), 24u);
  int valid = 0, valid_at_offset = 0;
  for (const auto& c : all) {
    if (!c.valid()) continue;
    ++valid;
    EXPECT_EQ(c.pairing_offset, kPairingOffset);
  }
  for (const auto& c : candidate_identifications(piece)) valid_at_offset += c.valid() ? 1 : 0;
  EXPECT_EQ(valid, 1);
  EXPECT_EQ(valid_at_offset, 1);
  // Petrie closure is what singles it out: other correspondences also give
  // closed oriented degree-7 surfaces.
  int degree_seven_closed = 0;
  for (const auto& c : all) degree_seven_closed += c.closed && c.oriented && c.all_degree_seven ? 1 : 0;
  EXPECT_GT(degree_seven_closed, 1);
}

TEST_P(PieceTest, WrongPairingFailsToIdentify) {
  for (int offset : {0, 1}) EXPECT_THROW(identify(build_fundamental_piece(GetParam(), offset)), TopologyError);
}

TEST_P(PieceTest, NonEmbeddability) {
  const auto piece = build_fundamental_piece(GetParam());
  const auto r = verify_nonembeddability(piece);
  EXPECT_TRUE(r.pass());
  for (const auto& p : r.pairs) {
    EXPECT_GT(p.line_angle_deg, 1.0);
    EXPECT_TRUE(p.non_parallel);
    EXPECT_FALSE(are_parallel(p.e_normal, p.f_normal));
    EXPECT_NEAR(p.line_angle_deg, r.pairs[0].line_angle_deg, 1e-9);
  }
  EXPECT_TRUE(r.symmetry_maps_e_normals);
  EXPECT_EQ(r.f_to_f_prime_rotation_deg, 120);
  // Symmetry image of E is exactly E'.
  const Vec3 img = piece.symmetry.apply_vector(piece.square("E").normal());
  EXPECT_LE(norm(img - piece.square("E'").normal()), kEps);
}

INSTANTIATE_TEST_SUITE_P(BothChiralities, PieceTest, ::testing::Values(Chirality::Left, Chirality::Right),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Quotient, SquareECoordinatesAndNormal) {
  const auto piece = build_fundamental_piece(Chirality::Right);
  const double h = antiprism_half_height();
  const double d = solve_d();
  const std::array<Point3, 4> want{{{-h, 0, -1}, {-h, -1, 0}, {d, -0.5, 0.5}, {d, 0.5, -0.5}}};
  const auto& e = piece.square("E");
  EXPECT_TRUE(SamePointSet(e.points, want));
  EXPECT_TRUE(are_parallel(e.normal(), {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(3.0)}));
  // Square planarity and side length.
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(distance(e.points[k], e.points[(k + 1) % 4]), kEdgeLength, kEps);
}

TEST(Quotient, LabelledTrianglesArePresentWithExpectedNormals) {
  const auto piece = build_fundamental_piece(Chirality::Right);
  const double h = antiprism_half_height();
  const double r2 = std::numbers::sqrt2;
  const std::map<std::string, Vec3> want{{"A", {0, 0, 1}},
                                         {"B", {r2 - 1, 0, 2 * r2 * h}},
                                         {"C", {1 - r2, -2 * h, 2 * h}},
                                         {"D", {0, -1 / r2, 1 / r2}}};
  for (const auto& lt : labeled_triangles(piece)) {
    EXPECT_GE(lt.triangle, 0) << lt.label;
    EXPECT_TRUE(are_parallel(lt.normal, want.at(lt.label))) << lt.label;
  }
}

TEST(Quotient, PrintedFNormalsAreNotConstructedSquareNormals) {
  // The printed F and F' normals do not match any square of the
  // construction; the report carries the constructed values instead.
  for (Chirality c : {Chirality::Left, Chirality::Right}) {
    const auto g = grow(3, c);
    for (const auto& ps : g.tree.solids) {
      const Solid s = transformed(DecorationTree::canonical(ps.kind), ps.frame);
      for (const auto& q : s.squares) {
        const Vec3 n = cross(s.vertices[q[1]] - s.vertices[q[0]], s.vertices[q[2]] - s.vertices[q[0]]);
        EXPECT_GT(line_angle_deg(n, printed_f_prime_normal()), 1.0);
        EXPECT_GT(line_angle_deg(n, printed_f_normal()), 1.0);
      }
    }
  }
}

TEST(Quotient, GenusRequiresClosedOrientedSurface) {
  auto q = identify(build_fundamental_piece(Chirality::Right));
  q.surface.triangles.pop_back();
  EXPECT_THROW(genus(q), TopologyError);
}

class CoveringTest : public ::testing::TestWithParam<Chirality> {};

TEST_P(CoveringTest, SeedLabelsRootPrism) {
  const auto q = identify(build_fundamental_piece(GetParam()));
  const auto cl = covering_label(grow(0, GetParam()).surface, q);
  ASSERT_EQ(cl.triangle_label.size(), 2u);
  EXPECT_EQ(cl.triangle_label[0], 0);
  EXPECT_EQ(cl.triangle_label[1], 1);
  EXPECT_EQ(cl.interior_vertices_checked, 0);
}

TEST_P(CoveringTest, ConsistentUpToDepthFour) {
  const auto q = identify(build_fundamental_piece(GetParam()));
  const AdjacencyIndex qadj(q.surface);
  for (int k = 1; k <= 4; ++k) {
    const auto g = grow(k, GetParam());
    const auto cl = covering_label(g.surface, q);
    const auto deg = vertex_degrees(g.surface);
    int interior = 0;
    for (int v = 0; v < g.surface.num_vertices(); ++v) interior += deg.on_boundary[v] ? 0 : 1;
    EXPECT_EQ(cl.interior_vertices_checked, interior) << k;
    int total = 0;
    for (auto [label, count] : cl.label_histogram) {
      EXPECT_GE(label, 0);
      EXPECT_LT(label, 56);
      total += count;
    }
    EXPECT_EQ(total, g.surface.num_triangles());
    // Every labelled triangle maps its corners onto its label's corners,
    // preserving cyclic order.
    for (int t = 0; t < g.surface.num_triangles(); ++t) {
      const auto& src = g.surface.triangles[t];
      const auto& dst = q.surface.triangles[cl.triangle_label[t]];
      int shift = 0;
      while (shift < 3 && dst[shift] != cl.vertex_image[src[0]]) ++shift;
      ASSERT_LT(shift, 3);
      for (int i = 0; i < 3; ++i) EXPECT_EQ(cl.vertex_image[src[i]], dst[(shift + i) % 3]);
    }
  }
}

TEST_P(CoveringTest, InteriorLinksMatchInCyclicOrder) {
  const auto q = identify(build_fundamental_piece(GetParam()));
  const AdjacencyIndex qadj(q.surface);
  const auto g = grow(3, GetParam());
  const AdjacencyIndex adj(g.surface);
  const auto cl = covering_label(g.surface, q);
  const auto deg = vertex_degrees(g.surface, adj);
  for (int t = 0; t < g.surface.num_triangles(); ++t) {
    for (int v : g.surface.triangles[t]) {
      if (deg.on_boundary[v]) continue;
      const auto fan = vertex_fan(adj, t, v);
      const auto qfan = vertex_fan(qadj, cl.triangle_label[t], cl.vertex_image[v]);
      ASSERT_EQ(fan.size(), 7u);
      ASSERT_EQ(qfan.size(), 7u);
      std::set<int> labels;
      for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_EQ(cl.triangle_label[fan[i]], qfan[i]);
        labels.insert(cl.triangle_label[fan[i]]);
      }
      EXPECT_EQ(labels.size(), 7u);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(BothChiralities, CoveringTest, ::testing::Values(Chirality::Left, Chirality::Right),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Covering, RejectsInconsistentLabels) {
  // Reversing one quotient triangle breaks the edge matching used by the
  // label propagation.
  auto q = identify(build_fundamental_piece(Chirality::Right));
  std::swap(q.surface.triangles[0][1], q.surface.triangles[0][2]);
  EXPECT_THROW(covering_label(grow(2, Chirality::Right).surface, q), CoveringError);
}

}  // namespace
