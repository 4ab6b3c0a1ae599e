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

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "klein37/assembly.hpp"
#include "klein37/intersect.hpp"
#include "klein37/petrie.hpp"
#include "klein37/quotient.hpp"
#include "klein37/surface.hpp"

namespace klein37 {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: enough to round-trip any double.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

struct ExportInfo {
  Chirality chirality = Chirality::Right;
  int iterations = 0;
  std::string kind = "grow";  ///< what the surface is: grow, piece, quotient
};

inline void write_obj(std::ostream& os, const TriangleSurface& s, const ExportInfo& info) {
  if (s.num_triangles() == 0) throw std::invalid_argument("export: empty surface");
  os << "# klein37 " << kVersion << "\n";
  os << "# surface " << info.kind << "\n";
  os << "# chirality " << to_string(info.chirality) << "\n";
  os << "# iterations " << info.iterations << "\n";
  for (const auto& v : s.vertices)
    os << "v " << format_real(v.x) << ' ' << format_real(v.y) << ' ' << format_real(v.z) << '\n';
  for (const auto& t : s.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

inline void write_ply(std::ostream& os, const TriangleSurface& s, const ExportInfo& info) {
  if (s.num_triangles() == 0) throw std::invalid_argument("export: empty surface");
  os << "ply\nformat ascii 1.0\n";
  os << "comment klein37 " << kVersion << "\n";
  os << "comment surface " << info.kind << "\n";
  os << "comment chirality " << to_string(info.chirality) << "\n";
  os << "comment iterations " << info.iterations << "\n";
  os << "element vertex " << s.num_vertices() << "\n";
  os << "property double x\nproperty double y\nproperty double z\n";
  os << "element face " << s.num_triangles() << "\n";
  os << "property list uchar int vertex_indices\nend_header\n";
  for (const auto& v : s.vertices) os << format_real(v.x) << ' ' << format_real(v.y) << ' ' << format_real(v.z) << '\n';
  for (const auto& t : s.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

namespace detail {

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

inline void export_obj(const TriangleSurface& s, const std::string& path, const ExportInfo& info) {
  detail::write_file(path, [&](std::ostream& os) { write_obj(os, s, info); });
}

inline void export_ply(const TriangleSurface& s, const std::string& path, const ExportInfo& info) {
  detail::write_file(path, [&](std::ostream& os) { write_ply(os, s, info); });
}

using Json = nlohmann::json;

inline Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

template <class K>
Json histogram_json(const std::map<K, int>& h) {
  Json j = Json::object();
  for (const auto& [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

struct ReportOptions {
  Chirality chirality = Chirality::Right;
  int growth_iterations = 3;  ///< growth table covers k = 0..growth_iterations
  int k_max = 6;              ///< self-intersection search bound (0 disables)
  Tolerance tol{};
};

inline Json constants_json() {
  return {{"h", antiprism_half_height()},
          {"d", solve_d()},
          {"edge_length", kEdgeLength},
          {"apex_offset", prism_apex_offset()}};
}

inline Json growth_json(int k, Chirality c) {
  const GrowResult g = grow(k, c);
  const AdjacencyIndex adj(g.surface);
  const auto deg = vertex_degrees(g.surface, adj);
  const auto counts = simplex_counts(g.surface, adj);
  return {{"iteration", k},
          {"prisms", g.tree.count(SolidKind::Prism)},
          {"antiprisms", g.tree.count(SolidKind::Antiprism)},
          {"triangles", counts.faces},
          {"edges", counts.edges},
          {"vertices", counts.vertices},
          {"euler_characteristic", counts.euler()},
          {"frontier_squares", static_cast<int>(g.tree.frontier().size())},
          {"boundary_loops", static_cast<int>(boundary_loops(g.surface, adj).size())},
          {"interior_degree_histogram", histogram_json(deg.histogram(true))},
          {"degree_histogram", histogram_json(deg.histogram(false))}};
}

inline Json quotient_json(const QuotientSurface& q) {
  const AdjacencyIndex adj(q.surface);
  const auto counts = simplex_counts(q.surface, adj);
  const auto deg = vertex_degrees(q.surface, adj);
  const bool closed = is_closed(adj);
  const bool oriented = is_oriented(q.surface, adj);
  Json j{{"faces", counts.faces},
         {"edges", counts.edges},
         {"vertices", counts.vertices},
         {"euler_characteristic", counts.euler()},
         {"closed", closed},
         {"oriented", oriented},
         {"degree_histogram", histogram_json(deg.histogram())},
         {"pairing_offset", q.pairing_offset},
         {"correspondence", {{"rotation", q.correspondence.rotation}, {"flipped", q.correspondence.flipped}}}};
  j["genus"] = closed && oriented ? Json(genus(q)) : Json(nullptr);
  return j;
}

inline Json petrie_json(const AdjacencyIndex& adj) {
  const auto census = petrie_census(adj, 64);
  Json j{{"states", census.states},
         {"orbits", census.orbits},
         {"exceeded", census.exceeded},
         {"period_histogram", histogram_json(census.period_histogram)}};
  j["period"] = census.period_histogram.size() == 1 && census.exceeded == 0 ? Json(census.period_histogram.begin()->first)
                                                                            : Json(nullptr);
  return j;
}

/// Printed normal of square F' and of square F, kept for reconciliation.
inline Vector3 printed_f_prime_normal() {
  return {6.0, std::sqrt(6.0) + 4.0 * std::sqrt(3.0), std::sqrt(6.0) - 4.0 * std::sqrt(3.0)};
}
inline Vector3 printed_f_normal() {
  return {-6.0 * std::sqrt(3.0) - std::sqrt(6.0), 2.0 - std::sqrt(2.0), -48.0 + 12.0 * std::sqrt(2.0)};
}

inline Json normals_json(const FundamentalPiece& piece, const NonEmbeddabilityReport& ne) {
  Json normals = Json::object();
  for (const auto& lt : labeled_triangles(piece)) normals[lt.label] = to_json(lt.normal);
  for (const auto& sq : piece.squares) normals[sq.label] = to_json(sq.normal());
  Json pairs = Json::array();
  for (const auto& p : ne.pairs)
    pairs.push_back({{"e", p.e_label},
                     {"f", p.f_label},
                     {"line_angle_deg", p.line_angle_deg},
                     {"oriented_angle_deg", p.oriented_angle_deg},
                     {"non_parallel", p.non_parallel}});
  return {{"normals", normals},
          {"pairs", pairs},
          {"pass", ne.pass()},
          {"f_to_f_prime_rotation_deg", ne.f_to_f_prime_rotation_deg},
          {"printed_f_prime_line_angle_deg", line_angle_deg(printed_f_prime_normal(), piece.square("F'").normal())},
          {"printed_f_line_angle_deg", line_angle_deg(printed_f_normal(), piece.square("F").normal())}};
}

inline Json witness_json(const FirstIntersection& fi) {
  const auto& w = fi.witness;
  auto path = [](const SolidPath& p) {
    Json a = Json::array();
    for (auto s : p) a.push_back(static_cast<int>(s));
    return a;
  };
  return {{"iteration", fi.iteration},
          {"triangles", {w.triangle_a, w.triangle_b}},
          {"solids", {w.solid_a, w.solid_b}},
          {"paths", {path(w.path_a), path(w.path_b)}},
          {"point", to_json(w.point)},
          {"divergent_branches", fi.divergent_branches}};
}

/// Full verification report. Keys are sorted, so equal inputs give equal
/// bytes.
inline Json build_report(const ReportOptions& opt) {
  Json r;
  r["schema"] = "klein37.report";
  r["schema_version"] = kReportSchemaVersion;
  r["tool_version"] = kVersion;
  r["chirality"] = to_string(opt.chirality);
  r["constants"] = constants_json();
  Json growth = Json::array();
  for (int k = 0; k <= opt.growth_iterations; ++k) growth.push_back(growth_json(k, opt.chirality));
  r["growth"] = growth;

  const FundamentalPiece piece = build_fundamental_piece(opt.chirality);
  const QuotientSurface q = identify(piece);
  r["quotient"] = quotient_json(q);
  r["quotient"]["piece_triangles"] = piece.surface.num_triangles();
  r["petrie"] = petrie_json(AdjacencyIndex(q.surface));
  const auto ne = verify_nonembeddability(piece, opt.tol);
  r["nonembeddability"] = normals_json(piece, ne);

  Json inter{{"k_max", opt.k_max}};
  inter["first"] = nullptr;
  if (opt.k_max >= 1)
    if (auto fi = first_self_intersecting_iteration(opt.k_max, opt.chirality, opt.tol)) inter["first"] = witness_json(*fi);
  r["intersection"] = inter;
  return r;
}

inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

inline void export_report_json(const Json& j, const std::string& path) {
  detail::write_file(path, [&](std::ostream& os) { os << dump_report(j); });
}

}  // namespace klein37
