#pragma once

// Laakso-style series-parallel graphs built by iterated edge subdivision.
//
// Level 0 is a single edge. To go from level j to level j+1, every edge is
// replaced by the 10-vertex pattern below: a jut edge into a fork, two
// vertex-disjoint 4-edge wave branches to a second fork, and a jut edge out.
//
//       positions  0 1  2  3  4  5  6  7  8 9
//                  s A P1 M1 P2 Q1 M2 Q2 C t
//
//   s--A--P1--M1--P2--C--t      (branch 1: sub-edges 1..4)
//       \--Q1--M2--Q2--/        (branch 2: sub-edges 5..8)
//
// Both branches have length 4, so a level-n edge distance scales by exactly 6
// per level and every source-sink geodesic picks one branch per traversed
// copy. The two branch midpoints (positions 3 and 6) are the canonical
// same-height pair separated by two disjoint routes of length 4.
//
// Everything about the structure is arithmetic in the ids:
//   * edge i at level j has children 10 i .. 10 i + 9 at level j+1;
//   * subdividing edge i at level j creates 8 interior vertices with ids
//     vertex_count(j) + 8 i + (slot - 1), slot = 1..8 mapping to positions
//     A..C in the table above;
//   * the copy of the level-k graph sitting over a level-(n-k) edge is
//     addressed by that edge index.
// Vertex ids are therefore stable across levels: the level-j graph is the
// subgraph on the first vertex_count(j) ids.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "heislab/rng.hpp"

namespace heislab {

using Vertex = std::int32_t;

enum class PairClass { kEqual, kSeries, kParallel };

// Result of greedily developing the route from x to y into steps whose
// lengths are powers of 6: step i connects points[i] to points[i+1] at graph
// distance exactly 6^scales[i], and the step lengths sum to d(x, y).
struct DevelopedPath {
  std::vector<Vertex> points;
  std::vector<int> scales;
  std::int64_t length() const;                      // sum of 6^scales[i]
  std::size_t step_count() const { return scales.size(); }
};

namespace laakso_detail {

// Pattern tables, indexed by sub-edge k = 0..9: endpoints as positions 0..9.
inline constexpr std::array<int, 10> kSubU = {0, 1, 2, 3, 4, 1, 5, 6, 7, 8};
inline constexpr std::array<int, 10> kSubV = {1, 2, 3, 4, 8, 5, 6, 7, 8, 9};
// Graph distance of each position from position 0 within the pattern.
inline constexpr std::array<int, 10> kPosHeight = {0, 1, 2, 3, 4, 2, 3, 4, 5, 6};
// Full 10 x 10 pattern distance matrix (computed once by BFS).
const std::array<std::array<std::int8_t, 10>, 10>& pattern_distance();

}  // namespace laakso_detail

std::int64_t pow6(int k);

class LaaksoGraph {
 public:
  static constexpr int kMaxLevel = 6;

  // Builds the level-n graph. Throws std::invalid_argument outside [0, 6].
  explicit LaaksoGraph(int level);

  int level() const { return level_; }
  std::int64_t vertex_count() const { return vcount_[static_cast<std::size_t>(level_)]; }
  std::int64_t vertex_count(int lvl) const;
  std::int64_t edge_count() const { return ecount_[static_cast<std::size_t>(level_)]; }
  std::int64_t edge_count(int lvl) const;
  Vertex source() const { return 0; }
  Vertex sink() const { return 1; }
  std::int64_t diameter() const { return pow6(level_); }

  // Endpoints of a level-lvl edge, oriented so that the graph distance to the
  // global source grows by 6^(level-lvl) from u to v.
  Vertex edge_u(int lvl, std::int64_t e) const;
  Vertex edge_v(int lvl, std::int64_t e) const;

  // Birth arithmetic. birth_level is 0 for the two terminals, else the level
  // whose subdivision created the vertex. slot is 0 for the source, 9 for the
  // sink, and the pattern position 1..8 for interior vertices. birth_edge is
  // the level-(birth_level-1) edge whose subdivision created the vertex, -1
  // for the terminals.
  int birth_level(Vertex v) const;
  std::int64_t birth_edge(Vertex v) const;
  int slot(Vertex v) const;

  // The level-lvl edge strictly containing v (requires birth_level(v) > lvl).
  std::int64_t ancestor_edge(Vertex v, int lvl) const;
  // All level-lvl edges whose closed copy contains v: the single ancestor for
  // a vertex born below lvl, or every incident level-lvl edge for a vertex of
  // the level-lvl graph.
  std::vector<std::int64_t> touching_edges(int lvl, Vertex v) const;

  // Exact graph distance at the final level, O(level) arithmetic per query.
  std::int64_t distance(Vertex u, Vertex v) const;
  // Independent oracle: breadth-first search on the explicit adjacency.
  std::int64_t distance_bfs(Vertex u, Vertex v) const;
  void bfs_from(Vertex start, std::vector<std::int32_t>* dist) const;

  // d(source, v) for every vertex. Every edge connects heights h and h+1.
  std::vector<std::int32_t> heights() const;

  // Adjacency (undirected). Neighbor lists are ordered by the index of the
  // connecting edge; incident_edges_at is parallel to neighbors_at.
  std::span<const Vertex> neighbors(Vertex v) const;
  std::span<const Vertex> neighbors_at(int lvl, Vertex v) const;
  std::span<const std::int64_t> incident_edges_at(int lvl, Vertex v) const;

  // kSeries when some source-sink geodesic visits both vertices, kParallel
  // otherwise (kEqual when u == v).
  PairClass classify_pair(Vertex u, Vertex v) const;

  // All degree-3 vertices, ascending. These are exactly the fork positions
  // (pattern slots 1 and 8) of every subdivision.
  std::vector<Vertex> fork_points() const;

  // Copies of the level-k graph, one per level-(level-k) edge.
  std::int64_t copy_count(int k) const;
  std::pair<Vertex, Vertex> copy_terminals(int k, std::int64_t idx) const;
  std::vector<Vertex> copy_vertices(int k, std::int64_t idx) const;
  // Base-10 digits of the hosting edge index: the chain of sub-edge choices
  // from the whole graph down to the copy.
  std::vector<int> copy_address(int k, std::int64_t idx) const;

  // Uniformly random source-sink geodesic (one fair branch choice per
  // traversed copy), as a vertex sequence of length 6^level + 1.
  std::vector<Vertex> sample_geodesic(CounterRng& rng) const;
  // log2 of the number of source-sink geodesics: (6^level - 1) / 5.
  double geodesic_count_log2() const;
  // Every source-sink geodesic; throws std::length_error when the count
  // exceeds cap.
  std::vector<std::vector<Vertex>> all_geodesics(std::int64_t cap = 100000) const;

  // Greedy development of the x -> y route into powers-of-6 steps. The step
  // lengths always sum to d(x, y); when both endpoints live at scales
  // coarser than their distance the scale sequence is also nonincreasing
  // with at most 5 repeats per scale.
  DevelopedPath developed_path(Vertex x, Vertex y) const;

  // One "edge,u,v" row per final-level edge.
  void export_edges_csv(std::ostream& os) const;

 private:
  struct Csr {
    std::vector<std::int64_t> offset;
    std::vector<Vertex> nbr;
    std::vector<std::int64_t> edge;
  };

  void check_vertex(Vertex v) const;
  // Distances from w to the two terminals of the copy on w's ancestor edge
  // at level target (requires birth_level(w) > target).
  std::pair<std::int64_t, std::int64_t> terminal_dists(Vertex w, int target) const;
  void append_geodesic(int lvl, std::int64_t e, CounterRng* rng, std::vector<Vertex>* out) const;

  int level_;
  std::vector<std::int64_t> vcount_;      // vcount_[j] = vertex count of level j
  std::vector<std::int64_t> ecount_;   // 10^j (edge counts per level)
  std::vector<std::vector<Vertex>> eu_, ev_;
  std::vector<Csr> adj_;
};

}  // namespace heislab
