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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "klein37/io.hpp"
#include "klein37/klein37.hpp"

namespace {

using namespace klein37;
namespace fs = std::filesystem;

constexpr double kEps = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

bool RoundsTo(double x, double printed, int decimals) {
  return std::abs(x - printed) <= 0.5 * std::pow(10.0, -decimals) + 1e-15;
}

double MaxEdgeDeviation(const Solid& s) {
  double worst = 0.0;
  auto edge = [&](int a, int b) { worst = std::max(worst, std::abs(distance(s.vertices[a], s.vertices[b]) - kEdgeLength)); };
  for (const auto& t : s.triangles)
    for (int i = 0; i < 3; ++i) edge(t[i], t[(i + 1) % 3]);
  for (const auto& q : s.squares)
    for (int i = 0; i < 4; ++i) edge(q[i], q[(i + 1) % 4]);
  return worst;
}

Outcome Constants() {
  Outcome o;
  const double h = antiprism_half_height();
  o.require(h == std::pow(8.0, -0.25), "h != 8^(-1/4)");
  o.require(RoundsTo(h, 0.59460356, 8), "h printed value");
  const double d = solve_d();
  o.require(RoundsTo(d, -1.81934843, 8), "d printed value");
  o.require(std::abs(d - (-h - std::sqrt(1.5))) <= 1e-12, "d closed form");
  o.detail = o.pass ? "h=" + format_real(h) + " d=" + format_real(d) : o.detail;
  return o;
}

Outcome Regularity() {
  Outcome o;
  const double w1 = MaxEdgeDeviation(canonical_prism());
  const double w2 = MaxEdgeDeviation(canonical_antiprism());
  o.require(w1 <= kEps && check_regular(canonical_prism()).pass, "prism");
  o.require(w2 <= kEps && check_regular(canonical_antiprism()).pass, "antiprism");
  const double hp = antiprism_half_height() + 1e-3;
  o.require(!check_regular(canonical_antiprism(hp)).pass, "perturbed antiprism passes");
  o.require(!check_regular(canonical_prism(hp)).pass || !check_regular(canonical_antiprism(hp)).pass,
            "perturbed solids pass");
  o.require(MaxEdgeDeviation(canonical_antiprism(hp)) > kEps, "perturbed edge lengths");
  if (o.pass) o.detail = "max edge deviation " + format_real(std::max(w1, w2));
  return o;
}

Outcome Normals() {
  Outcome o;
  const auto piece = build_fundamental_piece(Chirality::Right);
  const double h = antiprism_half_height();
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  const std::map<std::string, Vec3> printed{
      {"A", {0, 0, 1}}, {"B", {r2 - 1, 0, 2 * r2 * h}}, {"C", {1 - r2, -2 * h, 2 * h}}, {"D", {0, -1, 1}}};
  Tolerance tol;
  tol.eps_angle = kEps;
  for (const auto& lt : labeled_triangles(piece)) {
    o.require(lt.triangle >= 0, lt.label + " not in piece");
    o.require(are_parallel(lt.normal, printed.at(lt.label), tol), lt.label + " not parallel");
  }
  o.require(are_parallel(piece.square("E").normal(), {r2, r3, r3}, tol), "E not parallel");
  if (o.pass) o.detail = "A, B, C, D, E parallel within 1e-9";
  return o;
}

Outcome QuotientCombinatorics() {
  Outcome o;
  const auto piece = build_fundamental_piece(Chirality::Right);
  o.require(piece.surface.num_triangles() == 56, "piece triangles");
  const auto q = identify(piece);
  const AdjacencyIndex adj(q.surface);
  const auto c = simplex_counts(q.surface, adj);
  o.require(is_closed(adj), "not closed");
  o.require(is_oriented(q.surface, adj), "not oriented");
  o.require(c.vertices == 24 && c.edges == 84 && c.faces == 56, "V/E/F");
  o.require(c.euler() == -4, "chi");
  o.require(genus(q) == 3, "genus");
  const auto deg = vertex_degrees(q.surface, adj);
  int sevens = 0;
  for (int d : deg.degree) sevens += d == 7 ? 1 : 0;
  o.require(sevens == 24, "degrees");
  if (o.pass) o.detail = "V=24 E=84 F=56 chi=-4 genus=3";
  return o;
}

Outcome PetrieClosure() {
  Outcome o;
  const auto q = identify(build_fundamental_piece(Chirality::Right));
  const AdjacencyIndex adj(q.surface);
  const auto census = petrie_census(adj, 64);
  o.require(census.states == 336, "states");
  o.require(census.exceeded == 0 && census.period_histogram.size() == 1 && census.period_histogram.count(8) == 1 &&
                census.period_histogram.at(8) == 336,
            "periods");
  o.require(census.orbits == 42, "orbits=" + std::to_string(census.orbits));
  if (o.pass) o.detail = "336 states, period 8, 42 orbits";
  return o;
}

Outcome NonEmbeddability() {
  Outcome o;
  const auto ne = verify_nonembeddability(build_fundamental_piece(Chirality::Right));
  for (const auto& p : ne.pairs) {
    // Independent angle: acos of the normalized dot product of the lines.
    const double c = std::abs(dot(normalized(p.e_normal), normalized(p.f_normal)));
    const double angle = std::acos(std::min(1.0, c)) * 180.0 / M_PI;
    o.require(angle > 1.0, p.e_label + "/" + p.f_label + " parallel");
    o.require(std::abs(angle - p.line_angle_deg) <= 1e-6, "angle mismatch");
    o.require(std::abs(p.line_angle_deg - ne.pairs[0].line_angle_deg) <= kEps, "angles disagree");
  }
  if (o.pass) o.detail = "angle " + format_real(ne.pairs[0].line_angle_deg) + " deg";
  return o;
}

Outcome Immersion() {
  Outcome o;
  for (Chirality c : {Chirality::Right, Chirality::Left}) {
    const auto fi = first_self_intersecting_iteration(6, c);
    o.require(fi.has_value(), "no intersection up to 6");
    if (!fi) continue;
    o.require(fi->iteration <= 6, "k* > 6");
    o.require(fi->divergent_branches, "witness not from divergent branches");
    const auto s = grow(fi->iteration, c).surface;
    const auto& w = fi->witness;
    o.require(!share_vertex(s.triangles[w.triangle_a], s.triangles[w.triangle_b]), "witness shares a vertex");
    o.require(tri_tri_intersect(s.triangle_points(w.triangle_a), s.triangle_points(w.triangle_b)).intersects,
              "witness pair disjoint");
    for (int k = 0; k < fi->iteration; ++k)
      o.require(!brute_force_self_intersects(grow(k, c).surface).has_value(), "k=" + std::to_string(k) + " intersects");
    if (c == Chirality::Right && o.pass)
      o.detail = "k*=" + std::to_string(fi->iteration) + " triangles " + std::to_string(w.triangle_a) + "/" +
                 std::to_string(w.triangle_b);
  }
  for (int k = 0; k <= 6; ++k) {
    for (Chirality c : {Chirality::Right, Chirality::Left}) {
      const auto s = grow(k, c).surface;
      if (s.num_triangles() > 2000) break;
      const auto fast = surface_self_intersects(s);
      const auto slow = brute_force_self_intersects(s);
      o.require(fast.has_value() == slow.has_value() &&
                    (!fast || (fast->triangle_a == slow->triangle_a && fast->triangle_b == slow->triangle_b)),
                "pruned != brute force at k=" + std::to_string(k));
    }
  }
  return o;
}

Outcome Covering() {
  Outcome o;
  const auto g = grow(3, Chirality::Right);
  o.require(g.tree.count(SolidKind::Prism) == 22 && g.tree.count(SolidKind::Antiprism) == 21 &&
                g.surface.num_triangles() == 212,
            "grow(3) counts");
  try {
    const auto cl = covering_label(g.surface, identify(build_fundamental_piece(Chirality::Right)));
    o.require(cl.interior_vertices_checked > 0, "no interior vertices");
    if (o.pass) o.detail = std::to_string(cl.interior_vertices_checked) + " interior links bijective";
  } catch (const CoveringError& e) {
    o.require(false, e.what());
  }
  return o;
}

Outcome Mirror() {
  Outcome o;
  for (int k = 0; k <= 3; ++k) {
    const auto left = grow(k, Chirality::Left).surface;
    const auto mirrored = mirror(grow(k, Chirality::Right).surface);
    const auto cg = find_congruence(left, mirrored, kEps);
    o.require(cg.has_value() && cg->max_deviation <= kEps, "k=" + std::to_string(k));
    // Check the vertex correspondence directly.
    if (cg)
      for (int v = 0; v < left.num_vertices(); ++v)
        o.require(distance(cg->motion.apply(left.vertices[v]), mirrored.vertices[cg->vertex_map[v]]) <= kEps,
                  "vertex " + std::to_string(v));
  }
  if (o.pass) o.detail = "k=0..3 congruent within 1e-9";
  return o;
}

Outcome Growth() {
  Outcome o;
  const int want[3][3] = {{1, 0, 2}, {4, 3, 32}, {10, 9, 92}};
  for (int k = 0; k <= 4; ++k) {
    const auto g = grow(k, Chirality::Right);
    if (k < 3)
      o.require(g.tree.count(SolidKind::Prism) == want[k][0] && g.tree.count(SolidKind::Antiprism) == want[k][1] &&
                    g.surface.num_triangles() == want[k][2],
                "counts k=" + std::to_string(k));
    const auto deg = vertex_degrees(g.surface);
    for (const auto& [d, n] : deg.histogram(true)) o.require(d == 7, "degree " + std::to_string(d));
  }
  if (o.pass) o.detail = "(1,0,2) (4,3,32) (10,9,92); interior degree 7 for k=0..4";
  return o;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome Determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("klein37_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  for (const std::string fmt : {"obj", "json"}) {
    std::string runs[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path out = dir / (fmt + std::to_string(i));
      const std::string cmd = std::string("'") + KLEIN37_CLI_PATH + "' generate --iterations 3 --format " + fmt +
                              " --out '" + out.string() + "' > /dev/null 2>&1";
      const int st = std::system(cmd.c_str());
      o.require(WIFEXITED(st) && WEXITSTATUS(st) == 0, fmt + " generate failed");
      runs[i] = Slurp(out);
    }
    o.require(!runs[0].empty() && runs[0] == runs[1], fmt + " outputs differ");
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = "obj and json byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constants", Constants},
      {"solid regularity", Regularity},
      {"normal reproduction", Normals},
      {"quotient combinatorics", QuotientCombinatorics},
      {"Petrie closure", PetrieClosure},
      {"non-embeddability", NonEmbeddability},
      {"immersion", Immersion},
      {"covering", Covering},
      {"chirality mirror", Mirror},
      {"growth counts", Growth},
      {"determinism", Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s (%s) [%.0f ms]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), ms);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
