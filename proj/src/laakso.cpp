#include "heislab/laakso.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace heislab {

namespace laakso_detail {

const std::array<std::array<std::int8_t, 10>, 10>& pattern_distance() {
  static const auto table = [] {
    std::array<std::array<std::int8_t, 10>, 10> d{};
    for (int s = 0; s < 10; ++s) {
      std::array<std::int8_t, 10> row;
      row.fill(-1);
      row[static_cast<std::size_t>(s)] = 0;
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (std::size_t k = 0; k < 10; ++k) {
          int w = -1;
          if (kSubU[k] == u) w = kSubV[k];
          if (kSubV[k] == u) w = kSubU[k];
          if (w >= 0 && row[static_cast<std::size_t>(w)] < 0) {
            row[static_cast<std::size_t>(w)] =
                static_cast<std::int8_t>(row[static_cast<std::size_t>(u)] + 1);
            q.push(w);
          }
        }
      }
      d[static_cast<std::size_t>(s)] = row;
    }
    return d;
  }();
  return table;
}

}  // namespace laakso_detail

using laakso_detail::kSubU;
using laakso_detail::kSubV;
using laakso_detail::pattern_distance;

std::int64_t pow6(int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= 6;
  return r;
}

std::int64_t DevelopedPath::length() const {
  std::int64_t total = 0;
  for (const int a : scales) total += pow6(a);
  return total;
}

LaaksoGraph::LaaksoGraph(int level) : level_(level) {
  if (level < 0 || level > kMaxLevel) {
    throw std::invalid_argument("LaaksoGraph: level must be in [0, " +
                                std::to_string(kMaxLevel) + "], got " + std::to_string(level));
  }
  const auto n = static_cast<std::size_t>(level);
  vcount_.resize(n + 1);
  ecount_.resize(n + 1);
  eu_.resize(n + 1);
  ev_.resize(n + 1);
  vcount_[0] = 2;
  ecount_[0] = 1;
  eu_[0] = {0};
  ev_[0] = {1};
  for (std::size_t j = 1; j <= n; ++j) {
    ecount_[j] = ecount_[j - 1] * 10;
    vcount_[j] = vcount_[j - 1] + 8 * ecount_[j - 1];
    eu_[j].resize(static_cast<std::size_t>(ecount_[j]));
    ev_[j].resize(static_cast<std::size_t>(ecount_[j]));
    const std::int64_t base = vcount_[j - 1];
    for (std::int64_t i = 0; i < ecount_[j - 1]; ++i) {
      // Position -> vertex map for the subdivision of edge i.
      Vertex pos[10];
      pos[0] = eu_[j - 1][static_cast<std::size_t>(i)];
      pos[9] = ev_[j - 1][static_cast<std::size_t>(i)];
      for (int s = 1; s <= 8; ++s) {
        pos[s] = static_cast<Vertex>(base + 8 * i + (s - 1));
      }
      for (int k = 0; k < 10; ++k) {
        const auto child = static_cast<std::size_t>(10 * i + k);
        eu_[j][child] = pos[kSubU[static_cast<std::size_t>(k)]];
        ev_[j][child] = pos[kSubV[static_cast<std::size_t>(k)]];
      }
    }
  }

  // Per-level undirected adjacency, neighbor lists in connecting-edge order.
  adj_.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    Csr& a = adj_[j];
    const auto nv = static_cast<std::size_t>(vcount_[j]);
    a.offset.assign(nv + 1, 0);
    for (std::int64_t e = 0; e < ecount_[j]; ++e) {
      ++a.offset[static_cast<std::size_t>(eu_[j][static_cast<std::size_t>(e)]) + 1];
      ++a.offset[static_cast<std::size_t>(ev_[j][static_cast<std::size_t>(e)]) + 1];
    }
    for (std::size_t v = 0; v < nv; ++v) a.offset[v + 1] += a.offset[v];
    a.nbr.resize(static_cast<std::size_t>(2 * ecount_[j]));
    a.edge.resize(static_cast<std::size_t>(2 * ecount_[j]));
    std::vector<std::int64_t> cursor(a.offset.begin(), a.offset.end() - 1);
    for (std::int64_t e = 0; e < ecount_[j]; ++e) {
      const Vertex u = eu_[j][static_cast<std::size_t>(e)];
      const Vertex v = ev_[j][static_cast<std::size_t>(e)];
      auto& cu = cursor[static_cast<std::size_t>(u)];
      a.nbr[static_cast<std::size_t>(cu)] = v;
      a.edge[static_cast<std::size_t>(cu)] = e;
      ++cu;
      auto& cv = cursor[static_cast<std::size_t>(v)];
      a.nbr[static_cast<std::size_t>(cv)] = u;
      a.edge[static_cast<std::size_t>(cv)] = e;
      ++cv;
    }
  }
}

void LaaksoGraph::check_vertex(Vertex v) const {
  if (v < 0 || v >= vertex_count()) {
    throw std::out_of_range("LaaksoGraph: vertex " + std::to_string(v) + " out of range");
  }
}

std::int64_t LaaksoGraph::vertex_count(int lvl) const {
  if (lvl < 0 || lvl > level_) throw std::out_of_range("vertex_count: bad level");
  return vcount_[static_cast<std::size_t>(lvl)];
}

std::int64_t LaaksoGraph::edge_count(int lvl) const {
  if (lvl < 0 || lvl > level_) throw std::out_of_range("edge_count: bad level");
  return ecount_[static_cast<std::size_t>(lvl)];
}

Vertex LaaksoGraph::edge_u(int lvl, std::int64_t e) const {
  if (lvl < 0 || lvl > level_ || e < 0 || e >= edge_count(lvl)) {
    throw std::out_of_range("edge_u: bad edge");
  }
  return eu_[static_cast<std::size_t>(lvl)][static_cast<std::size_t>(e)];
}

Vertex LaaksoGraph::edge_v(int lvl, std::int64_t e) const {
  if (lvl < 0 || lvl > level_ || e < 0 || e >= edge_count(lvl)) {
    throw std::out_of_range("edge_v: bad edge");
  }
  return ev_[static_cast<std::size_t>(lvl)][static_cast<std::size_t>(e)];
}

int LaaksoGraph::birth_level(Vertex v) const {
  check_vertex(v);
  if (v < 2) return 0;
  int b = 1;
  while (v >= vcount_[static_cast<std::size_t>(b)]) ++b;
  return b;
}

std::int64_t LaaksoGraph::birth_edge(Vertex v) const {
  const int b = birth_level(v);
  if (b == 0) return -1;
  return (v - vcount_[static_cast<std::size_t>(b - 1)]) / 8;
}

int LaaksoGraph::slot(Vertex v) const {
  const int b = birth_level(v);
  if (b == 0) return v == 0 ? 0 : 9;
  return static_cast<int>((v - vcount_[static_cast<std::size_t>(b - 1)]) % 8) + 1;
}

std::int64_t LaaksoGraph::ancestor_edge(Vertex v, int lvl) const {
  const int b = birth_level(v);
  if (lvl < 0 || lvl > level_) throw std::out_of_range("ancestor_edge: bad level");
  if (b <= lvl) {
    throw std::invalid_argument("ancestor_edge: vertex " + std::to_string(v) +
                                " is not strictly inside a level-" + std::to_string(lvl) +
                                " edge");
  }
  std::int64_t e = birth_edge(v);  // level b-1 index
  for (int j = b - 1; j > lvl; --j) e /= 10;
  return e;
}

std::vector<std::int64_t> LaaksoGraph::touching_edges(int lvl, Vertex v) const {
  const int b = birth_level(v);
  if (lvl < 0 || lvl > level_) throw std::out_of_range("touching_edges: bad level");
  if (b > lvl) return {ancestor_edge(v, lvl)};
  const auto inc = incident_edges_at(lvl, v);
  return {inc.begin(), inc.end()};
}

std::pair<std::int64_t, std::int64_t> LaaksoGraph::terminal_dists(Vertex w, int target) const {
  const auto& pd = pattern_distance();
  const int b = birth_level(w);
  assert(b > target);
  int lvl = b - 1;
  std::int64_t e = birth_edge(w);
  std::int64_t scale = pow6(level_ - b);
  const auto s = static_cast<std::size_t>(slot(w));
  std::int64_t ds = scale * pd[s][0];
  std::int64_t dt = scale * pd[s][9];
  while (lvl > target) {
    const auto k = static_cast<std::size_t>(e % 10);
    e /= 10;
    --lvl;
    scale *= 6;
    const auto a = static_cast<std::size_t>(kSubU[k]);
    const auto c = static_cast<std::size_t>(kSubV[k]);
    const std::int64_t nds = std::min(ds + scale * pd[a][0], dt + scale * pd[c][0]);
    const std::int64_t ndt = std::min(ds + scale * pd[a][9], dt + scale * pd[c][9]);
    ds = nds;
    dt = ndt;
  }
  return {ds, dt};
}

std::int64_t LaaksoGraph::distance(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return 0;
  const int bu = birth_level(u);
  const int bv = birth_level(v);
  if (bu == 0 && bv == 0) return pow6(level_);
  if (bu == 0 || bv == 0) {
    const Vertex w = bu == 0 ? v : u;
    const Vertex term = bu == 0 ? u : v;
    const auto [ds, dt] = terminal_dists(w, 0);
    return term == 0 ? ds : dt;
  }

  // Deepest level at which both ancestor chains agree.
  int ju = bu - 1, jv = bv - 1;
  std::int64_t cu = birth_edge(u), cv = birth_edge(v);
  while (ju > jv) {
    cu /= 10;
    --ju;
  }
  while (jv > ju) {
    cv /= 10;
    --jv;
  }
  while (cu != cv) {
    cu /= 10;
    cv /= 10;
    --ju;
  }
  const int jstar = ju;
  const std::int64_t scale = pow6(level_ - jstar - 1);  // sub-edge span of the split copy
  const auto& pd = pattern_distance();

  // Position of each vertex relative to the split copy: either a pattern
  // vertex of its skeleton, or strictly inside one of its sub-edges.
  struct Rel {
    bool skeleton;
    int pos;                  // pattern position when skeleton
    std::size_t ka, kb;       // sub-edge terminal positions otherwise
    std::int64_t da, db;      // distances to those terminals
  };
  auto relate = [&](Vertex w, int bw) {
    Rel r{};
    if (bw == jstar + 1) {
      r.skeleton = true;
      r.pos = slot(w);
    } else {
      r.skeleton = false;
      const std::int64_t child = ancestor_edge(w, jstar + 1);
      const auto k = static_cast<std::size_t>(child % 10);
      r.ka = static_cast<std::size_t>(kSubU[k]);
      r.kb = static_cast<std::size_t>(kSubV[k]);
      const auto [da, db] = terminal_dists(w, jstar + 1);
      r.da = da;
      r.db = db;
    }
    return r;
  };
  const Rel ru = relate(u, bu);
  const Rel rv = relate(v, bv);

  if (ru.skeleton && rv.skeleton) {
    return scale * pd[static_cast<std::size_t>(ru.pos)][static_cast<std::size_t>(rv.pos)];
  }
  if (ru.skeleton != rv.skeleton) {
    const Rel& s = ru.skeleton ? ru : rv;
    const Rel& i = ru.skeleton ? rv : ru;
    const auto p = static_cast<std::size_t>(s.pos);
    return std::min(i.da + scale * pd[p][i.ka], i.db + scale * pd[p][i.kb]);
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& [px, dx] :
       {std::pair{ru.ka, ru.da}, std::pair{ru.kb, ru.db}}) {
    for (const auto& [py, dy] :
         {std::pair{rv.ka, rv.da}, std::pair{rv.kb, rv.db}}) {
      best = std::min(best, dx + scale * pd[px][py] + dy);
    }
  }
  return best;
}

void LaaksoGraph::bfs_from(Vertex start, std::vector<std::int32_t>* dist) const {
  check_vertex(start);
  const auto nv = static_cast<std::size_t>(vertex_count());
  dist->assign(nv, -1);
  (*dist)[static_cast<std::size_t>(start)] = 0;
  std::vector<Vertex> frontier{start}, next;
  std::int32_t d = 0;
  const Csr& a = adj_[static_cast<std::size_t>(level_)];
  while (!frontier.empty()) {
    ++d;
    next.clear();
    for (const Vertex u : frontier) {
      for (std::int64_t i = a.offset[static_cast<std::size_t>(u)];
           i < a.offset[static_cast<std::size_t>(u) + 1]; ++i) {
        const Vertex w = a.nbr[static_cast<std::size_t>(i)];
        auto& dw = (*dist)[static_cast<std::size_t>(w)];
        if (dw < 0) {
          dw = d;
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
}

std::int64_t LaaksoGraph::distance_bfs(Vertex u, Vertex v) const {
  std::vector<std::int32_t> dist;
  bfs_from(u, &dist);
  return dist[static_cast<std::size_t>(v)];
}

std::vector<std::int32_t> LaaksoGraph::heights() const {
  std::vector<std::int32_t> h;
  bfs_from(source(), &h);
  return h;
}

std::span<const Vertex> LaaksoGraph::neighbors(Vertex v) const {
  return neighbors_at(level_, v);
}

std::span<const Vertex> LaaksoGraph::neighbors_at(int lvl, Vertex v) const {
  if (lvl < 0 || lvl > level_) throw std::out_of_range("neighbors_at: bad level");
  const Csr& a = adj_[static_cast<std::size_t>(lvl)];
  if (v < 0 || v >= vcount_[static_cast<std::size_t>(lvl)]) {
    throw std::out_of_range("neighbors_at: vertex not in this level");
  }
  const auto b = static_cast<std::size_t>(a.offset[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(a.offset[static_cast<std::size_t>(v) + 1]);
  return {a.nbr.data() + b, e - b};
}

std::span<const std::int64_t> LaaksoGraph::incident_edges_at(int lvl, Vertex v) const {
  if (lvl < 0 || lvl > level_) throw std::out_of_range("incident_edges_at: bad level");
  const Csr& a = adj_[static_cast<std::size_t>(lvl)];
  if (v < 0 || v >= vcount_[static_cast<std::size_t>(lvl)]) {
    throw std::out_of_range("incident_edges_at: vertex not in this level");
  }
  const auto b = static_cast<std::size_t>(a.offset[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(a.offset[static_cast<std::size_t>(v) + 1]);
  return {a.edge.data() + b, e - b};
}

PairClass LaaksoGraph::classify_pair(Vertex u, Vertex v) const {
  if (u == v) return PairClass::kEqual;
  const std::int64_t span = pow6(level_);
  const std::int64_t via_uv = distance(source(), u) + distance(u, v) + distance(v, sink());
  if (via_uv == span) return PairClass::kSeries;
  const std::int64_t via_vu = distance(source(), v) + distance(v, u) + distance(u, sink());
  return via_vu == span ? PairClass::kSeries : PairClass::kParallel;
}

std::vector<Vertex> LaaksoGraph::fork_points() const {
  std::vector<Vertex> out;
  for (int b = 1; b <= level_; ++b) {
    const std::int64_t base = vcount_[static_cast<std::size_t>(b - 1)];
    for (std::int64_t i = 0; i < ecount_[static_cast<std::size_t>(b - 1)]; ++i) {
      out.push_back(static_cast<Vertex>(base + 8 * i));      // slot 1
      out.push_back(static_cast<Vertex>(base + 8 * i + 7));  // slot 8
    }
  }
  return out;
}

std::int64_t LaaksoGraph::copy_count(int k) const {
  if (k < 0 || k > level_) throw std::out_of_range("copy_count: bad size");
  return ecount_[static_cast<std::size_t>(level_ - k)];
}

std::pair<Vertex, Vertex> LaaksoGraph::copy_terminals(int k, std::int64_t idx) const {
  if (k < 0 || k > level_ || idx < 0 || idx >= copy_count(k)) {
    throw std::out_of_range("copy_terminals: bad copy");
  }
  const auto lvl = static_cast<std::size_t>(level_ - k);
  return {eu_[lvl][static_cast<std::size_t>(idx)], ev_[lvl][static_cast<std::size_t>(idx)]};
}

std::vector<Vertex> LaaksoGraph::copy_vertices(int k, std::int64_t idx) const {
  const auto [a, b] = copy_terminals(k, idx);
  std::vector<Vertex> out{a, b};
  const int host = level_ - k;
  std::int64_t lo = idx, hi = idx + 1;
  for (int j = host; j < level_; ++j) {
    // Interiors born at level j+1 from level-j edges [lo, hi).
    const std::int64_t base = vcount_[static_cast<std::size_t>(j)];
    for (std::int64_t v = base + 8 * lo; v < base + 8 * hi; ++v) {
      out.push_back(static_cast<Vertex>(v));
    }
    lo *= 10;
    hi *= 10;
  }
  return out;
}

std::vector<int> LaaksoGraph::copy_address(int k, std::int64_t idx) const {
  if (k < 0 || k > level_ || idx < 0 || idx >= copy_count(k)) {
    throw std::out_of_range("copy_address: bad copy");
  }
  std::vector<int> digits(static_cast<std::size_t>(level_ - k));
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    *it = static_cast<int>(idx % 10);
    idx /= 10;
  }
  return digits;
}

void LaaksoGraph::append_geodesic(int lvl, std::int64_t e, CounterRng* rng,
                                  std::vector<Vertex>* out) const {
  if (lvl == level_) {
    out->push_back(ev_[static_cast<std::size_t>(lvl)][static_cast<std::size_t>(e)]);
    return;
  }
  const bool first_branch = rng == nullptr || !rng->next_bit();
  const std::array<int, 6> order = first_branch ? std::array<int, 6>{0, 1, 2, 3, 4, 9}
                                                : std::array<int, 6>{0, 5, 6, 7, 8, 9};
  for (const int k : order) append_geodesic(lvl + 1, 10 * e + k, rng, out);
}

std::vector<Vertex> LaaksoGraph::sample_geodesic(CounterRng& rng) const {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(pow6(level_)) + 1);
  out.push_back(source());
  append_geodesic(0, 0, &rng, &out);
  return out;
}

double LaaksoGraph::geodesic_count_log2() const {
  return static_cast<double>(pow6(level_) - 1) / 5.0;
}

std::vector<std::vector<Vertex>> LaaksoGraph::all_geodesics(std::int64_t cap) const {
  const double log2count = geodesic_count_log2();
  if (log2count > 62 || (std::int64_t{1} << static_cast<int>(log2count)) > cap) {
    throw std::length_error("all_geodesics: 2^" + std::to_string(log2count) +
                            " geodesics exceed cap " + std::to_string(cap));
  }
  // Iterative product expansion over the recursion tree: whenever a copy is
  // entered, the current partial path is duplicated, one duplicate per
  // branch.
  struct Frame {
    int lvl;
    std::int64_t e;
  };
  std::vector<std::vector<Vertex>> done;
  std::vector<std::pair<std::vector<Vertex>, std::vector<Frame>>> work;
  work.push_back({{source()}, {{0, 0}}});
  while (!work.empty()) {
    auto [path, stack] = std::move(work.back());
    work.pop_back();
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.lvl == level_) {
        path.push_back(ev_[static_cast<std::size_t>(f.lvl)][static_cast<std::size_t>(f.e)]);
        continue;
      }
      // Push the second branch variant as a separate work item.
      auto alt_path = path;
      auto alt_stack = stack;
      for (const int k : {9, 8, 7, 6, 5, 0}) {
        alt_stack.push_back({f.lvl + 1, 10 * f.e + k});
      }
      work.push_back({std::move(alt_path), std::move(alt_stack)});
      for (const int k : {9, 4, 3, 2, 1, 0}) {
        stack.push_back({f.lvl + 1, 10 * f.e + k});
      }
    }
    done.push_back(std::move(path));
  }
  std::sort(done.begin(), done.end());
  return done;
}

DevelopedPath LaaksoGraph::developed_path(Vertex x, Vertex y) const {
  check_vertex(x);
  check_vertex(y);
  DevelopedPath dp;
  dp.points.push_back(x);
  Vertex cur = x;
  std::int64_t d = distance(x, y);
  while (cur != y) {
    int k = 0;
    while (pow6(k + 1) <= d) ++k;
    k = std::min(k, level_ - birth_level(cur));
    for (;; --k) {
      const int lvl = level_ - k;
      const std::int64_t step = pow6(k);
      const auto nbrs = neighbors_at(lvl, cur);
      Vertex found = -1;
      for (const Vertex q : nbrs) {
        if (distance(q, y) == d - step) {
          found = q;
          break;  // neighbor lists are in edge order: smallest edge wins ties
        }
      }
      if (found >= 0) {
        cur = found;
        d -= step;
        dp.points.push_back(cur);
        dp.scales.push_back(k);
        break;
      }
      assert(k > 0 && "a unit step toward the target always exists");
    }
  }
  return dp;
}

void LaaksoGraph::export_edges_csv(std::ostream& os) const {
  os << "edge,u,v\n";
  const auto lvl = static_cast<std::size_t>(level_);
  for (std::int64_t e = 0; e < ecount_[lvl]; ++e) {
    os << e << ',' << eu_[lvl][static_cast<std::size_t>(e)] << ','
       << ev_[lvl][static_cast<std::size_t>(e)] << '\n';
  }
}

}  // namespace heislab
