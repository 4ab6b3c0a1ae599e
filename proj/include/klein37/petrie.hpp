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

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "klein37/surface.hpp"

namespace klein37 {

/// Thrown when a Petrie walk reaches a boundary edge.
class PathLeftSurface : public TopologyError {
 public:
  PathLeftSurface() : TopologyError("path leaves truncated surface") {}
};

enum class Turn : std::uint8_t { Left, Right };

inline Turn flipped(Turn t) { return t == Turn::Left ? Turn::Right : Turn::Left; }

/// Position of a Petrie walk: inside `face`, having entered through local
/// edge `entry` (tri[entry] -> tri[entry+1] in the face's winding). With
/// Turn::Right the walk leaves through the edge after `entry` (sharing its
/// end vertex); with Turn::Left through the edge before it.
struct PetrieState {
  int face = 0;
  int entry = 0;
  Turn turn = Turn::Right;
  bool operator==(const PetrieState&) const = default;
};

inline int exit_edge(const PetrieState& st) {
  return st.turn == Turn::Right ? (st.entry + 1) % 3 : (st.entry + 2) % 3;
}

/// Crosses the exit edge into the neighbouring face and flips the turn, so
/// that two consecutive crossed edges share a face and no three do.
inline PetrieState petrie_step(const AdjacencyIndex& adj, const PetrieState& st) {
  const HalfEdge o = adj.opposite(st.face, exit_edge(st));
  if (!o.valid()) throw PathLeftSurface();
  return {o.triangle, o.edge, flipped(st.turn)};
}

/// Like petrie_step but keeps the turn; walks the fan around one vertex.
inline PetrieState pivot_step(const AdjacencyIndex& adj, const PetrieState& st) {
  const HalfEdge o = adj.opposite(st.face, exit_edge(st));
  if (!o.valid()) throw PathLeftSurface();
  return {o.triangle, o.edge, st.turn};
}

/// The same walk traversed backwards, positioned in the same face: it enters
/// through the forward exit edge and leaves through the forward entry edge.
inline PetrieState reversed(const PetrieState& st) { return {st.face, exit_edge(st), flipped(st.turn)}; }

/// Smallest n <= max_steps with step^n(start) == start, or nullopt.
inline std::optional<int> petrie_period(const AdjacencyIndex& adj, const PetrieState& start, int max_steps) {
  if (max_steps < 1) throw std::invalid_argument("petrie_period: max_steps must be >= 1");
  PetrieState st = start;
  for (int n = 1; n <= max_steps; ++n) {
    st = petrie_step(adj, st);
    if (st == start) return n;
  }
  return std::nullopt;
}

/// Every (face, entry edge, turn) state of a surface, in index order.
inline std::vector<PetrieState> all_petrie_states(const TriangleSurface& s) {
  std::vector<PetrieState> out;
  out.reserve(static_cast<std::size_t>(s.num_triangles()) * 6);
  for (int f = 0; f < s.num_triangles(); ++f)
    for (int e = 0; e < 3; ++e)
      for (Turn t : {Turn::Left, Turn::Right}) out.push_back({f, e, t});
  return out;
}

struct PetrieCensus {
  int states = 0;
  int orbits = 0;
  int exceeded = 0;               ///< states without a period within max_steps
  std::map<int, int> period_histogram;  ///< period -> number of states
};

/// Periods of all states of a closed surface, and the number of orbits.
inline PetrieCensus petrie_census(const AdjacencyIndex& adj, int max_steps = 64) {
  const auto states = all_petrie_states(adj.surface());
  auto index = [](const PetrieState& st) { return (st.face * 3 + st.entry) * 2 + (st.turn == Turn::Right ? 1 : 0); };
  std::vector<bool> visited(states.size(), false);
  PetrieCensus c;
  c.states = static_cast<int>(states.size());
  for (const auto& st : states) {
    const auto p = petrie_period(adj, st, max_steps);
    if (!p) {
      ++c.exceeded;
      continue;
    }
    ++c.period_histogram[*p];
    if (visited[index(st)]) continue;
    ++c.orbits;
    PetrieState cur = st;
    do {
      visited[index(cur)] = true;
      cur = petrie_step(adj, cur);
    } while (!(cur == st));
  }
  return c;
}

/// Midpoints of the edges crossed by the walk from `start`, in order, until
/// the walk closes (at most `max_steps` points).
inline std::vector<Point3> petrie_polyline(const AdjacencyIndex& adj, const PetrieState& start, int max_steps = 64) {
  const auto& s = adj.surface();
  std::vector<Point3> pts;
  PetrieState st = start;
  for (int n = 0; n < max_steps; ++n) {
    const auto& tri = s.triangles[st.face];
    const int e = exit_edge(st);
    pts.push_back((s.vertices[tri[e]] + s.vertices[tri[(e + 1) % 3]]) * 0.5);
    st = petrie_step(adj, st);
    if (st == start) break;
  }
  return pts;
}

}  // namespace klein37
