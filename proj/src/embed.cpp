#include "heislab/embed.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace heislab {

namespace {

inline long double cross_ld(Complex a, Complex b) {
  return static_cast<long double>(a.real()) * static_cast<long double>(b.imag()) -
         static_cast<long double>(a.imag()) * static_cast<long double>(b.real());
}

// Sign of the bend of each sub-edge relative to its copy's axis.
constexpr std::array<int, 10> kBend = {0, +1, -1, -1, +1, -1, +1, +1, -1, 0};
// Flip inheritance: the mirrored branch hands its children the opposite
// orientation so the drawing is invariant under reflection plus branch swap.
constexpr std::array<int, 10> kFlip = {+1, +1, +1, +1, +1, -1, -1, -1, -1, +1};

}  // namespace

bool AngleSchedule::small() const {
  for (const double t : thetas) {
    if (!(t > 0.0) || t > kAngleCap) return false;
  }
  return true;
}

AngleSchedule angle_schedule(int m_param, int levels) {
  if (m_param < 1) {
    throw std::invalid_argument("angle_schedule: parameter must be at least 1, got " +
                                std::to_string(m_param));
  }
  if (levels < 0) throw std::invalid_argument("angle_schedule: negative level count");
  AngleSchedule s;
  s.m_param = m_param;
  s.thetas.resize(static_cast<std::size_t>(levels));
  for (int j = 1; j <= levels; ++j) {
    const double a = static_cast<double>(m_param + j);
    s.thetas[static_cast<std::size_t>(j - 1)] = 1.0 / (std::sqrt(a) * std::log2(a));
  }
  return s;
}

double scale_constant(const AngleSchedule& s, int l, int m) {
  if (l < 1 || m < l || m > s.levels()) {
    throw std::out_of_range("scale_constant: need 1 <= l <= m <= levels");
  }
  double prod = 1.0;
  for (int j = l; j <= m; ++j) {
    prod *= 6.0 / (2.0 + 4.0 * std::cos(s.thetas[static_cast<std::size_t>(j - 1)]));
  }
  return prod;
}

HPoint EmbeddedMap::point(Vertex v) const {
  return h_point(planar_[static_cast<std::size_t>(v)], vertical_[static_cast<std::size_t>(v)]);
}

double EmbeddedMap::target_distance(Vertex u, Vertex v) const {
  const auto iu = static_cast<std::size_t>(u);
  const auto iv = static_cast<std::size_t>(v);
  return h1::distance(planar_[iu], vertical_[iu], planar_[iv], vertical_[iv]);
}

double EmbeddedMap::edge_central_defect(std::int64_t e) const {
  const Vertex u = graph_->edge_u(level(), e);
  const Vertex v = graph_->edge_v(level(), e);
  const auto iu = static_cast<std::size_t>(u);
  const auto iv = static_cast<std::size_t>(v);
  const Complex pu = planar_[iu], pv = planar_[iv];
  const Complex mid = 0.5 * (pu + pv);
  // The defect is invariant under left translation; evaluating in the
  // midpoint frame keeps the cross product at unit scale.
  const long double zu = static_cast<long double>(vertical_[iu]) - 0.5L * cross_ld(mid, pu);
  const long double zv = static_cast<long double>(vertical_[iv]) - 0.5L * cross_ld(mid, pv);
  const long double c = (zv - zu) - 0.5L * cross_ld(pu - mid, pv - mid);
  return static_cast<double>(c);
}

double EmbeddedMap::span() const {
  return std::abs(planar_[static_cast<std::size_t>(graph_->sink())] -
                  planar_[static_cast<std::size_t>(graph_->source())]);
}

void EmbeddedMap::write_csv(std::ostream& os) const {
  os << "vertex,x,y,z\n";
  char buf[128];
  for (std::size_t v = 0; v < planar_.size(); ++v) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", v, planar_[v].real(),
                  planar_[v].imag(), vertical_[v]);
    os << buf;
  }
}

EmbeddedMap embed(const LaaksoGraph& g, std::vector<double> angles) {
  const int n = g.level();
  if (static_cast<int>(angles.size()) != n) {
    throw std::invalid_argument("embed: need one angle per level, got " +
                                std::to_string(angles.size()) + " for level " + std::to_string(n));
  }
  for (const double a : angles) {
    if (!(a > 0.0) || a >= std::numbers::pi / 2) {
      throw std::domain_error("embed: angles must lie in (0, pi/2)");
    }
  }

  // Planar span of a copy at each level; final edges are unit segments.
  std::vector<double> spans(static_cast<std::size_t>(n) + 1);
  spans[static_cast<std::size_t>(n)] = 1.0;
  for (int j = n - 1; j >= 0; --j) {
    spans[static_cast<std::size_t>(j)] = spans[static_cast<std::size_t>(j) + 1] *
                                         (2.0 + 4.0 * std::cos(angles[static_cast<std::size_t>(j)]));
  }

  EmbeddedMap map;
  map.graph_ = &g;
  map.angles_ = angles;
  const auto nv = static_cast<std::size_t>(g.vertex_count());
  map.planar_.assign(nv, Complex{0.0, 0.0});
  map.planar_[static_cast<std::size_t>(g.sink())] = Complex{spans[0], 0.0};

  // Assign the 8 interior skeleton vertices of every copy, recursing down
  // the edge tree. Terminal positions were assigned by the parent.
  struct Frame {
    int lvl;
    std::int64_t e;
    Complex base;
    Complex dir;  // unit vector along the copy's axis
    int flip;
  };
  std::vector<Frame> stack{{0, 0, Complex{0.0, 0.0}, Complex{1.0, 0.0}, +1}};
  using laakso_detail::kSubU;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.lvl == n) continue;
    const double theta = angles[static_cast<std::size_t>(f.lvl)];
    const double c = std::cos(theta);
    const double sg = std::sin(theta) * f.flip;
    const double w = spans[static_cast<std::size_t>(f.lvl) + 1];
    const std::array<Complex, 10> local = {
        Complex{0.0, 0.0},          Complex{1.0, 0.0},           Complex{1.0 + c, sg},
        Complex{1.0 + 2 * c, 0.0},  Complex{1.0 + 3 * c, -sg},   Complex{1.0 + c, -sg},
        Complex{1.0 + 2 * c, 0.0},  Complex{1.0 + 3 * c, sg},    Complex{1.0 + 4 * c, 0.0},
        Complex{2.0 + 4 * c, 0.0}};
    const std::int64_t vbase = g.vertex_count(f.lvl);
    for (int s = 1; s <= 8; ++s) {
      const auto v = static_cast<std::size_t>(vbase + 8 * f.e + (s - 1));
      map.planar_[v] = f.base + f.dir * (w * local[static_cast<std::size_t>(s)]);
    }
    for (int k = 9; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      stack.push_back({f.lvl + 1, 10 * f.e + k,
                       f.base + f.dir * (w * local[static_cast<std::size_t>(kSubU[ku])]),
                       f.dir * std::polar(1.0, kBend[ku] * f.flip * theta),
                       kFlip[ku] * f.flip});
    }
  }

  // Horizontal lift along a breadth-first spanning tree, extended precision.
  std::vector<long double> z(nv, 0.0L);
  std::vector<char> seen(nv, 0);
  seen[static_cast<std::size_t>(g.source())] = 1;
  std::vector<Vertex> frontier{g.source()}, next;
  while (!frontier.empty()) {
    next.clear();
    for (const Vertex u : frontier) {
      const auto iu = static_cast<std::size_t>(u);
      for (const Vertex v : g.neighbors(u)) {
        const auto iv = static_cast<std::size_t>(v);
        if (seen[iv]) continue;
        seen[iv] = 1;
        z[iv] = z[iu] + 0.5L * cross_ld(map.planar_[iu], map.planar_[iv]);
        next.push_back(v);
      }
    }
    frontier.swap(next);
  }
  map.vertical_.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) map.vertical_[i] = static_cast<double>(z[i]);
  return map;
}

EmbeddedMap embed(const LaaksoGraph& g, const AngleSchedule& s) {
  return embed(g, s.thetas);
}

double signed_area(std::span<const Complex> points, bool close_with_chord) {
  if (points.size() < 3) {
    throw std::invalid_argument("signed_area: need at least 3 points");
  }
  if (!close_with_chord && points.front() != points.back()) {
    throw std::invalid_argument("signed_area: polyline is not closed");
  }
  // Kahan-compensated shoelace sum.
  long double sum = 0.0L, comp = 0.0L;
  const std::size_t m = points.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const long double term = cross_ld(points[i], points[i + 1]);
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (close_with_chord) sum += cross_ld(points[m - 1], points[0]) - comp;
  return static_cast<double>(0.5L * sum);
}

double segment_angle(const EmbeddedMap& map, Vertex u, Vertex v) {
  const Complex pu = map.planar_at(u);
  const Complex pv = map.planar_at(v);
  const Complex chord = pv - pu;
  const double len = std::abs(chord);
  if (len <= 1e-12 * (1.0 + std::abs(pu) + std::abs(pv))) {
    throw std::domain_error("segment_angle: planar images of " + std::to_string(u) + " and " +
                            std::to_string(v) + " coincide");
  }
  return std::atan2(std::abs(chord.imag()), std::abs(chord.real()));
}

}  // namespace heislab
