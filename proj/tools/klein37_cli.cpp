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

// Command-line front end: generate meshes, run the verification checks and
// write machine-readable reports. Exit codes: 0 success, 1 verification
// failure, 2 usage error.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "klein37/io.hpp"
#include "klein37/klein37.hpp"

namespace {

using namespace klein37;

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2 };

const std::map<std::string, Chirality> kChiralityNames{{"left", Chirality::Left}, {"right", Chirality::Right}};

void add_chirality(CLI::App* cmd, Chirality& c) {
  cmd->add_option("--chirality", c, "Twist direction (left|right)")
      ->transform(CLI::CheckedTransformer(kChiralityNames, CLI::ignore_case));
}

Json mesh_json(const GrowResult& g, const ExportInfo& info) {
  Json j;
  j["tool_version"] = kVersion;
  j["chirality"] = to_string(info.chirality);
  j["iterations"] = info.iterations;
  j["counts"] = {{"prisms", g.tree.count(SolidKind::Prism)},
                 {"antiprisms", g.tree.count(SolidKind::Antiprism)},
                 {"triangles", g.surface.num_triangles()},
                 {"vertices", g.surface.num_vertices()}};
  Json verts = Json::array();
  for (const auto& v : g.surface.vertices) verts.push_back(to_json(v));
  Json tris = Json::array();
  for (const auto& t : g.surface.triangles) tris.push_back({t[0], t[1], t[2]});
  j["vertices"] = verts;
  j["triangles"] = tris;
  j["triangle_solid"] = g.surface.triangle_solid;
  return j;
}

int run_generate(int iterations, Chirality c, const std::string& format, const std::string& out) {
  const GrowResult g = grow(iterations, c);
  const ExportInfo info{c, iterations, "grow"};
  if (format == "obj")
    export_obj(g.surface, out, info);
  else if (format == "ply")
    export_ply(g.surface, out, info);
  else
    export_report_json(mesh_json(g, info), out);
  std::cout << "wrote " << out << ": " << g.tree.count(SolidKind::Prism) << " prisms, "
            << g.tree.count(SolidKind::Antiprism) << " antiprisms, " << g.surface.num_triangles() << " triangles\n";
  return kOk;
}

int run_verify(int iterations, Chirality c, const Tolerance& tol) {
  bool ok = true;
  auto line = [&](const std::string& what, bool pass) {
    std::cout << (pass ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };
  line("prism regular", check_regular(canonical_prism(), tol).pass);
  line("antiprism regular", check_regular(canonical_antiprism(), tol).pass);
  const GrowResult g = grow(iterations, c);
  const AdjacencyIndex adj(g.surface);
  double worst = 0.0;
  for (int t = 0; t < g.surface.num_triangles(); ++t) {
    const auto p = g.surface.triangle_points(t);
    for (int e = 0; e < 3; ++e) worst = std::max(worst, std::abs(distance(p[e], p[(e + 1) % 3]) - kEdgeLength));
  }
  line("edge lengths sqrt(2) (max deviation " + format_real(worst) + ")", worst <= tol.eps_length);
  const auto deg = vertex_degrees(g.surface, adj);
  const auto hist = deg.histogram(true);
  line("interior vertex degrees all 7", hist.empty() || (hist.size() == 1 && hist.begin()->first == 7));
  line("oriented", is_oriented(g.surface, adj));
  return ok ? kOk : kFailed;
}

int run_quotient(Chirality c, int pairing_offset, const std::string& report, const std::string& mesh,
                 const Tolerance& tol) {
  const FundamentalPiece piece = build_fundamental_piece(c, pairing_offset);
  QuotientSurface q;
  try {
    q = identify(piece);
  } catch (const TopologyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  const Json qj = quotient_json(q);
  const auto ne = verify_nonembeddability(piece, tol);
  std::cout << "quotient: V=" << qj["vertices"] << " E=" << qj["edges"] << " F=" << qj["faces"]
            << " chi=" << qj["euler_characteristic"] << " genus=" << qj["genus"] << "\n";
  for (const auto& p : ne.pairs)
    std::cout << p.e_label << "/" << p.f_label << ": normals differ by " << format_real(p.line_angle_deg) << " deg\n";
  if (!report.empty()) {
    Json j;
    j["tool_version"] = kVersion;
    j["chirality"] = to_string(c);
    j["quotient"] = qj;
    j["petrie"] = petrie_json(AdjacencyIndex(q.surface));
    j["nonembeddability"] = normals_json(piece, ne);
    export_report_json(j, report);
  }
  if (!mesh.empty()) export_obj(q.surface, mesh, {c, 2, "quotient"});
  return ne.pass() ? kOk : kFailed;
}

int run_petrie(Chirality c, std::optional<int> iterations, std::optional<int> face, int edge, const std::string& turn,
               int max_steps) {
  TriangleSurface s;
  if (iterations)
    s = grow(*iterations, c).surface;
  else
    s = identify(build_fundamental_piece(c)).surface;
  const AdjacencyIndex adj(s);
  if (face) {
    if (*face < 0 || *face >= s.num_triangles() || edge < 0 || edge > 2) {
      std::cerr << "error: state out of range\n";
      return kUsage;
    }
    const PetrieState st{*face, edge, turn == "left" ? Turn::Left : Turn::Right};
    try {
      const auto p = petrie_period(adj, st, max_steps);
      if (p)
        std::cout << "period=" << *p << "\n";
      else
        std::cout << "exceeded max_steps=" << max_steps << "\n";
      return p ? kOk : kFailed;
    } catch (const PathLeftSurface& e) {
      std::cout << e.what() << "\n";
      return kFailed;
    }
  }
  if (!is_closed(adj)) {
    std::cerr << "error: census over all states needs a closed surface; pass --face for a single state\n";
    return kUsage;
  }
  const auto census = petrie_census(adj, max_steps);
  for (const auto& [period, count] : census.period_histogram)
    std::cout << "period=" << period << " for " << count << "/" << census.states << " states\n";
  if (census.exceeded) std::cout << "exceeded for " << census.exceeded << "/" << census.states << " states\n";
  std::cout << "orbits=" << census.orbits << "\n";
  const bool all_eight = census.exceeded == 0 && census.period_histogram.size() == 1 &&
                         census.period_histogram.begin()->first == 8;
  return all_eight ? kOk : kFailed;
}

int run_intersect(int k_max, Chirality c, const Tolerance& tol) {
  const auto fi = first_self_intersecting_iteration(k_max, c, tol);
  if (!fi) {
    std::cout << "no self-intersection up to k=" << k_max << "\n";
    return kFailed;
  }
  std::cout << "first self-intersection at k=" << fi->iteration << ": triangles " << fi->witness.triangle_a << " and "
            << fi->witness.triangle_b << " (solids " << fi->witness.solid_a << ", " << fi->witness.solid_b
            << ", divergent=" << (fi->divergent_branches ? "yes" : "no") << ")\n";
  return kOk;
}

int run_cover(int iterations, Chirality c) {
  const QuotientSurface q = identify(build_fundamental_piece(c));
  const GrowResult g = grow(iterations, c);
  try {
    const auto cl = covering_label(g.surface, q);
    std::cout << "covering consistent on " << g.surface.num_triangles() << " triangles; "
              << cl.interior_vertices_checked << " interior vertex links bijective\n";
    return kOk;
  } catch (const CoveringError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"klein37: immersed {3,7} surface from prisms and antiprisms"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Tolerance tol = default_tolerance();
  app.add_option("--eps", tol.eps_length, "Length tolerance (overrides KLEIN37_EPS)")->check(CLI::Range(1e-15, 1e-3));

  Chirality chirality = Chirality::Right;
  int iterations = 2;

  auto* gen = app.add_subcommand("generate", "Grow the surface and export it");
  std::string format = "obj", out;
  gen->add_option("--iterations", iterations, "Growth rounds")->check(CLI::NonNegativeNumber);
  add_chirality(gen, chirality);
  gen->add_option("--format", format, "obj|ply|json")->check(CLI::IsMember({"obj", "ply", "json"}));
  gen->add_option("--out", out, "Output path")->required();

  auto* ver = app.add_subcommand("verify", "Check solid regularity, edge lengths and vertex degrees");
  ver->add_option("--iterations", iterations, "Growth rounds")->check(CLI::NonNegativeNumber);
  add_chirality(ver, chirality);

  auto* quo = app.add_subcommand("quotient", "Build and identify the 56-triangle piece");
  std::string report, mesh;
  int pairing = kPairingOffset;
  add_chirality(quo, chirality);
  quo->add_option("--report", report, "Write a JSON report");
  quo->add_option("--mesh", mesh, "Write the closed quotient as OBJ");
  quo->add_option("--pairing-offset", pairing, "Dangling square paired with E (0..2)")->check(CLI::Range(0, 2));

  auto* pet = app.add_subcommand("petrie", "Petrie periods");
  bool on_quotient = false;
  std::optional<int> pet_iterations, face;
  int edge = 0, max_steps = 64;
  std::string turn = "right";
  add_chirality(pet, chirality);
  pet->add_flag("--quotient", on_quotient, "Use the closed quotient (default)");
  pet->add_option("--iterations", pet_iterations, "Use grow(k) instead of the quotient")->check(CLI::NonNegativeNumber);
  pet->add_option("--face", face, "Start face (single state)");
  pet->add_option("--edge", edge, "Start entry edge 0..2")->check(CLI::Range(0, 2));
  pet->add_option("--turn", turn, "left|right")->check(CLI::IsMember({"left", "right"}));
  pet->add_option("--max-steps", max_steps, "Step bound")->check(CLI::PositiveNumber);

  auto* inter = app.add_subcommand("intersect", "Find the first self-intersecting iteration");
  int k_max = 6;
  add_chirality(inter, chirality);
  inter->add_option("--k-max", k_max, "Largest iteration to test")->check(CLI::PositiveNumber);

  auto* cov = app.add_subcommand("cover", "Check covering labels of grow(k) by the quotient");
  cov->add_option("--iterations", iterations, "Growth rounds")->check(CLI::NonNegativeNumber);
  add_chirality(cov, chirality);

  auto* rep = app.add_subcommand("report", "Write the full verification report");
  int growth_iterations = 3;
  add_chirality(rep, chirality);
  rep->add_option("--out", out, "Output path")->required();
  rep->add_option("--growth-iterations", growth_iterations, "Growth table depth")->check(CLI::NonNegativeNumber);
  rep->add_option("--k-max", k_max, "Self-intersection search bound (0 skips)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*gen) return run_generate(iterations, chirality, format, out);
    if (*ver) return run_verify(iterations, chirality, tol);
    if (*quo) return run_quotient(chirality, pairing, report, mesh, tol);
    if (*pet) return run_petrie(chirality, on_quotient ? std::nullopt : pet_iterations, face, edge, turn, max_steps);
    if (*inter) return run_intersect(k_max, chirality, tol);
    if (*cov) return run_cover(iterations, chirality);
    if (*rep) {
      ReportOptions opt;
      opt.chirality = chirality;
      opt.growth_iterations = growth_iterations;
      opt.k_max = k_max;
      opt.tol = tol;
      const Json j = build_report(opt);
      export_report_json(j, out);
      std::cout << "wrote " << out << "\n";
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
