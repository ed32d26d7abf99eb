#pragma once

// Distortion measurement for embedded subdivision graphs.
//
// Every ratio below is image distance divided by graph distance for a pair
// of distinct vertices; an isometry would give ratio 1 everywhere.  The
// distortion of a map is max ratio / min ratio: the factor by which relative
// distances are warped, independent of global rescaling.  Exact mode visits
// every unordered pair; sampled mode draws pairs from a counter-based RNG so
// results are reproducible for a fixed seed at any thread count.

#include <cstdint>
#include <functional>
#include <string>

#include "heislab/embed.hpp"
#include "heislab/laakso.hpp"

namespace heislab {

// Extremal vertex pair together with its image-to-graph distance ratio.
struct RatioWitness {
  Vertex u = 0;
  Vertex v = 0;
  double ratio = 0.0;
};

// Result of a distortion measurement.  Witness ties are broken toward the
// lexicographically smallest (u, v), so reports are canonical.
struct DistortionReport {
  std::string mode;        // "exact" or "sampled"
  std::int64_t pairs = 0;  // unordered pairs examined (with multiplicity)
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double distortion = 0.0;  // max_ratio / min_ratio
  bool infinite = false;    // two distinct vertices share one image point
  RatioWitness min_witness;
  RatioWitness max_witness;
  std::int64_t samples = 0;  // sampled mode only
  std::uint64_t seed = 0;    // sampled mode only
};

// Distance between the images of two vertices.  Always invoked with u < v;
// must be nonnegative, and zero only when the map collapses the pair.
using TargetMetric = std::function<double(Vertex, Vertex)>;

// Exact mode refuses instances with more unordered pairs than this.
inline constexpr std::int64_t kExactPairCap = 100'000'000;

// Examine every unordered pair of distinct vertices.  Throws
// std::length_error naming the cap when the pair count exceeds
// kExactPairCap.  threads == 0 uses the hardware default.
DistortionReport measure_distortion(const LaaksoGraph& g,
                                    const TargetMetric& target,
                                    unsigned threads = 0);
DistortionReport measure_distortion(const LaaksoGraph& g,
                                    const EmbeddedMap& map,
                                    unsigned threads = 0);

// Draw `samples` uniform pairs of distinct vertices (with replacement).
// Deterministic for fixed (samples, seed) at any thread count.
DistortionReport sample_distortion(const LaaksoGraph& g,
                                   const TargetMetric& target,
                                   std::int64_t samples, std::uint64_t seed,
                                   unsigned threads = 0);
DistortionReport sample_distortion(const LaaksoGraph& g,
                                   const EmbeddedMap& map, std::int64_t samples,
                                   std::uint64_t seed, unsigned threads = 0);

// Reference curve (m + level)^(1/4) * log2(m + level)^(1/2): the shape the
// best achievable distortion follows as the depth grows.  Requires
// m_param + level > 1.
double growth_envelope(int level, double m_param);

// Smallest ratio restricted to pairs of vertices whose level-1 ancestor edge
// sets are disjoint, i.e. pairs that do not share a top-level copy.  This
// isolates the contribution of far-apart pairs: the heavy contraction all
// happens inside single copies.  Requires level >= 1.
double restricted_lower_ratio(const LaaksoGraph& g, const EmbeddedMap& map,
                              unsigned threads = 0);

}  // namespace heislab
