#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "heislab/laakso.hpp"
#include "heislab/rng.hpp"

using namespace heislab;

TEST_CASE("level sizes follow the subdivision recurrences") {
  // 8 new vertices and a factor of 10 in edges per subdivided edge.
  const std::int64_t expect_v[] = {2, 10, 90, 890, 8890};
  const std::int64_t expect_e[] = {1, 10, 100, 1000, 10000};
  for (int n = 0; n <= 4; ++n) {
    LaaksoGraph g(n);
    CHECK(g.vertex_count() == expect_v[n]);
    CHECK(g.edge_count() == expect_e[n]);
    for (int j = 0; j <= n; ++j) {
      CHECK(g.vertex_count(j) == expect_v[j]);
      CHECK(g.edge_count(j) == expect_e[j]);
    }
    CHECK(g.diameter() == pow6(n));
  }
  CHECK_THROWS_AS(LaaksoGraph(-1), std::invalid_argument);
  CHECK_THROWS_AS(LaaksoGraph(7), std::invalid_argument);
}

TEST_CASE("level-1 structure: forks, degrees, pattern distances") {
  LaaksoGraph g(1);
  // Degrees: terminals 1, forks 3, wave interiors 2.
  std::map<int, int> degree_histogram;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    degree_histogram[static_cast<int>(g.neighbors(v).size())]++;
  }
  CHECK(degree_histogram[1] == 2);
  CHECK(degree_histogram[2] == 6);
  CHECK(degree_histogram[3] == 2);

  const auto forks = g.fork_points();
  REQUIRE(forks.size() == 2);
  for (const Vertex f : forks) CHECK(g.neighbors(f).size() == 3);
  CHECK(g.slot(forks[0]) == 1);
  CHECK(g.slot(forks[1]) == 8);

  // Hand-checked distances in the 10-vertex pattern. Interior ids follow the
  // slot order A, P1, M1, P2, Q1, M2, Q2, C starting at id 2.
  const Vertex A = 2, P1 = 3, M1 = 4, P2 = 5, Q1 = 6, M2 = 7, Q2 = 8, C = 9;
  CHECK(g.distance(g.source(), g.sink()) == 6);
  CHECK(g.distance(P1, Q1) == 2);
  CHECK(g.distance(M1, M2) == 4);
  CHECK(g.distance(P1, Q2) == 4);
  CHECK(g.distance(P1, M2) == 3);
  CHECK(g.distance(P2, g.source()) == 4);
  CHECK(g.distance(P1, g.sink()) == 4);
  CHECK(g.distance(A, C) == 4);
  CHECK(g.distance(g.source(), A) == 1);
  CHECK(g.distance(M1, P2) == 1);
  // Eccentricity never exceeds the terminal-to-terminal span.
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      CHECK(g.distance(u, v) <= 6);
    }
  }
}

TEST_CASE("hierarchical distance matches breadth-first search") {
  for (int n = 1; n <= 3; ++n) {
    LaaksoGraph g(n);
    std::vector<std::int32_t> row;
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
      g.bfs_from(u, &row);
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        REQUIRE(g.distance(u, v) == row[static_cast<std::size_t>(v)]);
      }
    }
  }
  // Spot-check level 4 on random pairs.
  LaaksoGraph g(4);
  CounterRng rng(77);
  std::vector<std::int32_t> row;
  for (int it = 0; it < 60; ++it) {
    const auto u = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g.vertex_count())));
    g.bfs_from(u, &row);
    for (int jt = 0; jt < 500; ++jt) {
      const auto v =
          static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g.vertex_count())));
      REQUIRE(g.distance(u, v) == row[static_cast<std::size_t>(v)]);
    }
  }
}

TEST_CASE("a known deep vertex has the hand-computed terminal distances") {
  // The branch apex (slot 2) born from level-1 edge 1 of the level-2 graph:
  // two steps from the inner fork, eight from the source.
  LaaksoGraph g(2);
  const Vertex u = static_cast<Vertex>(g.vertex_count(1) + 8 * 1 + (2 - 1));
  CHECK(g.birth_level(u) == 2);
  CHECK(g.birth_edge(u) == 1);
  CHECK(g.slot(u) == 2);
  CHECK(g.distance(u, g.source()) == 8);
  CHECK(g.distance(u, g.sink()) == 28);
}

TEST_CASE("edges are graded by height") {
  for (int n = 1; n <= 3; ++n) {
    LaaksoGraph g(n);
    const auto h = g.heights();
    for (std::int64_t e = 0; e < g.edge_count(); ++e) {
      const Vertex u = g.edge_u(n, e);
      const Vertex v = g.edge_v(n, e);
      REQUIRE(h[static_cast<std::size_t>(v)] == h[static_cast<std::size_t>(u)] + 1);
    }
    // Coarse edges are graded at their own scale.
    for (int lvl = 0; lvl < n; ++lvl) {
      for (std::int64_t e = 0; e < g.edge_count(lvl); ++e) {
        REQUIRE(h[static_cast<std::size_t>(g.edge_v(lvl, e))] ==
                h[static_cast<std::size_t>(g.edge_u(lvl, e))] + pow6(n - lvl));
      }
    }
  }
}

TEST_CASE("birth arithmetic round-trips through the edge tables") {
  LaaksoGraph g(3);
  std::vector<int> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int b = 1; b <= 3; ++b) {
    for (std::int64_t e = 0; e < g.edge_count(b - 1); ++e) {
      for (int s = 1; s <= 8; ++s) {
        const auto v =
            static_cast<Vertex>(g.vertex_count(b - 1) + 8 * e + (s - 1));
        REQUIRE(g.birth_level(v) == b);
        REQUIRE(g.birth_edge(v) == e);
        REQUIRE(g.slot(v) == s);
        ++seen[static_cast<std::size_t>(v)];
      }
    }
  }
  CHECK(g.slot(g.source()) == 0);
  CHECK(g.slot(g.sink()) == 9);
  CHECK(g.birth_edge(g.source()) == -1);
  // Every interior vertex is born exactly once.
  CHECK(std::count(seen.begin() + 2, seen.end(), 1) == g.vertex_count() - 2);

  // Ancestor chains agree with the edge tables: the ancestor edge's
  // subdivision interval contains the vertex's birth edge.
  for (Vertex v = 2; v < g.vertex_count(); ++v) {
    const int b = g.birth_level(v);
    for (int lvl = 0; lvl < b; ++lvl) {
      const std::int64_t anc = g.ancestor_edge(v, lvl);
      std::int64_t be = g.birth_edge(v);
      for (int j = b - 1; j > lvl; --j) be /= 10;
      REQUIRE(anc == be);
    }
  }
}

TEST_CASE("degree-3 vertices are exactly the fork points") {
  for (int n = 1; n <= 3; ++n) {
    LaaksoGraph g(n);
    const auto forks = g.fork_points();
    CHECK(std::is_sorted(forks.begin(), forks.end()));
    // Two forks per subdivided edge across all levels: 2 (10^n - 1) / 9.
    CHECK(static_cast<std::int64_t>(forks.size()) == 2 * (g.edge_count() - 1) / 9);
    std::set<Vertex> fork_set(forks.begin(), forks.end());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      const bool deg3 = g.neighbors(v).size() == 3;
      REQUIRE(deg3 == fork_set.contains(v));
    }
  }
}

TEST_CASE("classification separates series from parallel pairs") {
  LaaksoGraph g(2);
  // The two level-1 branch apexes sit on different branches: parallel.
  const Vertex P1 = 3, Q1 = 6, A = 2, C = 9, M1 = 4, M2 = 7;
  CHECK(g.classify_pair(P1, Q1) == PairClass::kParallel);
  CHECK(g.classify_pair(M1, M2) == PairClass::kParallel);
  CHECK(g.classify_pair(A, C) == PairClass::kSeries);
  CHECK(g.classify_pair(A, P1) == PairClass::kSeries);
  CHECK(g.classify_pair(g.source(), g.sink()) == PairClass::kSeries);
  CHECK(g.classify_pair(A, A) == PairClass::kEqual);

  // Oracle: a pair is series exactly when some source-sink geodesic visits
  // both vertices.
  const auto geos = g.all_geodesics();
  REQUIRE(geos.size() == 128);
  CounterRng rng(5);
  for (int it = 0; it < 4000; ++it) {
    const auto u = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g.vertex_count())));
    const auto v = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g.vertex_count())));
    if (u == v) continue;
    bool witnessed = false;
    for (const auto& geo : geos) {
      const bool has_u = std::find(geo.begin(), geo.end(), u) != geo.end();
      const bool has_v = std::find(geo.begin(), geo.end(), v) != geo.end();
      if (has_u && has_v) {
        witnessed = true;
        break;
      }
    }
    REQUIRE((g.classify_pair(u, v) == PairClass::kSeries) == witnessed);
  }
}

TEST_CASE("geodesic sampling and enumeration") {
  LaaksoGraph g1(1);
  const auto geos1 = g1.all_geodesics();
  REQUIRE(geos1.size() == 2);
  for (const auto& geo : geos1) {
    REQUIRE(geo.size() == 7);
    CHECK(geo.front() == g1.source());
    CHECK(geo.back() == g1.sink());
  }
  CHECK(g1.geodesic_count_log2() == doctest::Approx(1.0));

  LaaksoGraph g2(2);
  CHECK(g2.geodesic_count_log2() == doctest::Approx(7.0));
  const auto geos2 = g2.all_geodesics();
  REQUIRE(geos2.size() == 128);
  std::set<std::vector<Vertex>> unique(geos2.begin(), geos2.end());
  CHECK(unique.size() == 128);
  for (const auto& geo : geos2) {
    REQUIRE(geo.size() == 37);
    CHECK(geo.front() == g2.source());
    CHECK(geo.back() == g2.sink());
    for (std::size_t i = 0; i + 1 < geo.size(); ++i) {
      // Consecutive vertices are adjacent and advance by one height step.
      const auto nb = g2.neighbors(geo[i]);
      REQUIRE(std::find(nb.begin(), nb.end(), geo[i + 1]) != nb.end());
    }
  }
  CHECK_THROWS_AS(LaaksoGraph(3).all_geodesics(), std::length_error);

  // Sampled geodesics are always members of the full enumeration, and both
  // branches of the outermost fork appear.
  CounterRng rng(11);
  std::set<std::vector<Vertex>> sampled;
  for (int it = 0; it < 64; ++it) {
    auto geo = g2.sample_geodesic(rng);
    REQUIRE(unique.contains(geo));
    sampled.insert(std::move(geo));
  }
  CHECK(sampled.size() > 20);
}

TEST_CASE("copies are addressed by host edges") {
  LaaksoGraph g(2);
  CHECK(g.copy_count(1) == 10);
  CHECK(g.copy_count(2) == 1);
  CHECK(g.copy_count(0) == 100);

  // The copy over level-1 edge 1 spans the first branch's opening wave.
  const auto [a, b] = g.copy_terminals(1, 1);
  CHECK(a == 2);  // outer fork
  CHECK(b == 3);  // first branch apex
  const auto verts = g.copy_vertices(1, 1);
  REQUIRE(verts.size() == 10);
  // Interior distances inside the copy scale like a level-1 graph.
  CHECK(g.distance(a, b) == 6);
  for (const Vertex v : verts) {
    CHECK(g.distance(a, v) <= 6);
    CHECK(g.distance(v, b) <= 6);
  }
  const auto addr = g.copy_address(1, 7);
  REQUIRE(addr.size() == 1);
  CHECK(addr[0] == 7);
  const auto addr2 = g.copy_address(0, 73);
  REQUIRE(addr2.size() == 2);
  CHECK(addr2[0] == 7);
  CHECK(addr2[1] == 3);

  // Whole-graph copy is the graph itself.
  const auto whole = g.copy_vertices(2, 0);
  CHECK(static_cast<std::int64_t>(whole.size()) == g.vertex_count());
}

TEST_CASE("developed paths telescope exactly") {
  LaaksoGraph g(2);
  // From the source to the first interior vertex of the last unit edge:
  // distance 7 = 6 + 1 decomposes into one coarse and one unit step.
  std::vector<std::int32_t> hrow;
  g.bfs_from(g.source(), &hrow);
  Vertex far7 = -1;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (hrow[static_cast<std::size_t>(v)] == 7 && g.birth_level(v) == 2) {
      far7 = v;
      break;
    }
  }
  REQUIRE(far7 >= 0);
  const auto dp = g.developed_path(g.source(), far7);
  CHECK(dp.length() == 7);
  REQUIRE(dp.scales.size() == 2);
  CHECK(dp.scales[0] == 1);
  CHECK(dp.scales[1] == 0);
  CHECK(dp.points.front() == g.source());
  CHECK(dp.points.back() == far7);

  // Every pair: the step lengths sum to the distance and every step joins
  // vertices at exactly its scale's distance.
  CounterRng rng(21);
  LaaksoGraph g3(3);
  for (int it = 0; it < 300; ++it) {
    const auto x = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g3.vertex_count())));
    const auto y = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g3.vertex_count())));
    const auto path = g3.developed_path(x, y);
    REQUIRE(path.length() == g3.distance(x, y));
    for (std::size_t i = 0; i < path.scales.size(); ++i) {
      REQUIRE(g3.distance(path.points[i], path.points[i + 1]) == pow6(path.scales[i]));
    }
  }

  // Coarse starts: scales nonincreasing, each scale at most 5 times.
  for (int it = 0; it < 400; ++it) {
    const auto x = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g3.vertex_count(1))));
    const auto y = static_cast<Vertex>(rng.next_below(static_cast<std::uint64_t>(g3.vertex_count(1))));
    const auto path = g3.developed_path(x, y);
    REQUIRE(path.length() == g3.distance(x, y));
    std::map<int, int> uses;
    for (std::size_t i = 0; i < path.scales.size(); ++i) {
      if (i + 1 < path.scales.size()) REQUIRE(path.scales[i] >= path.scales[i + 1]);
      ++uses[path.scales[i]];
    }
    for (const auto& [scale, count] : uses) REQUIRE(count <= 5);
  }
}

TEST_CASE("touching edges identify host copies") {
  LaaksoGraph g(2);
  // A deep interior vertex touches exactly one level-1 copy.
  const Vertex deep = static_cast<Vertex>(g.vertex_count(1) + 8 * 3 + 3);
  REQUIRE(g.birth_edge(deep) == 3);
  const auto hosts = g.touching_edges(1, deep);
  REQUIRE(hosts.size() == 1);
  CHECK(hosts[0] == 3);
  // A level-1 skeleton vertex touches every incident level-1 copy.
  const auto fork_hosts = g.touching_edges(1, 2);  // outer fork, degree 3
  CHECK(fork_hosts.size() == 3);
  const auto src_hosts = g.touching_edges(1, g.source());
  REQUIRE(src_hosts.size() == 1);
  CHECK(src_hosts[0] == 0);
}

TEST_CASE("csv export is stable") {
  LaaksoGraph g(1);
  std::ostringstream os;
  g.export_edges_csv(os);
  CHECK(os.str() ==
        "edge,u,v\n"
        "0,0,2\n"
        "1,2,3\n"
        "2,3,4\n"
        "3,4,5\n"
        "4,5,9\n"
        "5,2,6\n"
        "6,6,7\n"
        "7,7,8\n"
        "8,8,9\n"
        "9,9,1\n");
}
