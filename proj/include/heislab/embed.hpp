#pragma once

// Horizontal embedding of the Laakso graphs into the first Heisenberg group.
//
// Every copy is drawn as a planar double wave: a unit jut into the fork, two
// mirror-image branches that bend by +-theta around the axis, and a jut out.
// All sub-edges of a level-j copy leave at angle theta relative to their
// parent axis, so a copy whose children span w covers (2 + 4 cos theta) w
// along its own axis. Final-level edges are unit segments. The vertical
// coordinate is the unique lift with z(source) = 0 that makes every edge a
// horizontal segment: z(v) - z(u) = cross(p_u, p_v) / 2 along edges. The
// wave closes every cycle (each branch pairs an up-lobe with a down-lobe),
// which is what makes the lift well defined; the planar-coincident branch
// midpoints then differ only vertically, by 2 cos(theta) sin(theta) times
// the squared child span.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "heislab/heis.hpp"
#include "heislab/laakso.hpp"

namespace heislab {

// Angles shrink with depth: theta_j = 1 / (sqrt(M + j) log2(M + j)).
// thetas[0] is the outermost (largest) angle.
struct AngleSchedule {
  int m_param = 0;
  std::vector<double> thetas;

  int levels() const { return static_cast<int>(thetas.size()); }
  bool small() const;
};

// Largest angle for which the bi-Lipschitz estimates of the construction
// are claimed. Schedules above it still draw, but the quantitative
// pipelines require small() schedules.
inline constexpr double kAngleCap = 0.0625;

// Throws std::invalid_argument when m_param < 1 or levels < 0.
AngleSchedule angle_schedule(int m_param, int levels);

// Product of 6 / (2 + 4 cos theta_j) over j = l..m (1-based, inclusive).
// This is the factor by which graph distance 6^k exceeds the planar span of
// a size-k copy: span = 6^k / scale_constant(s, n-k+1, n).
double scale_constant(const AngleSchedule& s, int l, int m);

class EmbeddedMap {
 public:
  const LaaksoGraph& graph() const { return *graph_; }
  int level() const { return static_cast<int>(angles_.size()); }
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<Complex>& planar() const { return planar_; }
  const std::vector<double>& vertical() const { return vertical_; }

  Complex planar_at(Vertex v) const { return planar_[static_cast<std::size_t>(v)]; }
  double vertical_at(Vertex v) const { return vertical_[static_cast<std::size_t>(v)]; }
  HPoint point(Vertex v) const;

  double target_distance(Vertex u, Vertex v) const;
  // Center of point(u)^{-1} point(v) for the endpoints of a final-level
  // edge, evaluated in a translated frame with extended precision. Zero for
  // a perfectly horizontal edge.
  double edge_central_defect(std::int64_t e) const;
  // Planar source-to-sink distance.
  double span() const;

  // "vertex,x,y,z" rows, full round-trip precision.
  void write_csv(std::ostream& os) const;

 private:
  friend EmbeddedMap embed(const LaaksoGraph&, std::vector<double>);

  const LaaksoGraph* graph_ = nullptr;
  std::vector<double> angles_;
  std::vector<Complex> planar_;
  std::vector<double> vertical_;
};

// Draws the graph with the given per-level angles (angles[j] bends the
// copies at level j; angles.size() must equal g.level()). Each angle must
// lie in (0, pi/2). The graph must outlive the map.
EmbeddedMap embed(const LaaksoGraph& g, std::vector<double> angles);
EmbeddedMap embed(const LaaksoGraph& g, const AngleSchedule& s);

// Shoelace area of a planar polygon. With close_with_chord the polyline is
// closed by the chord from the last point back to the first; otherwise the
// first and last points must already coincide.
double signed_area(std::span<const Complex> points, bool close_with_chord);

// Acute angle between the planar chord f(u) f(v) and the layout axis.
// Throws std::domain_error when the planar images coincide (which happens
// exactly for branch-midpoint pairs).
double segment_angle(const EmbeddedMap& map, Vertex u, Vertex v);

}  // namespace heislab
