#pragma once

// The upward random walk on a subdivision graph and its re-forked divergence
// functional.
//
// The walk starts at the source, moves one height unit per step choosing
// uniformly among the up-neighbors (a fair coin at the two-way forks), and is
// absorbed at the sink.  Positions are defined for every integer time via the
// horizon convention: source for t <= 0, sink for t >= 6^m.
//
// The divergence functional compares the chain Z with re-forked copies
// Z~(s) that agree with Z through time s and evolve independently afterwards:
//
//   lhs = sum_k 2^(-kp) sum_t E[ d(f(Z_t), f(Z~_t(t - 2^k)))^p ]
//   rhs = sum_t E[ d(f(Z_t), f(Z_{t-1}))^p ]
//
// Fork times are restricted to the horizon [-1, 6^m]; s = -1 and s = 0 both
// mean a fully independent copy because the walk is deterministic at the
// source through time 0.  Under this convention every k-term with
// 2^k > 6^m + 1 vanishes identically (both copies are absorbed at every
// admissible t), so the k-sum below k_limit() is the whole sum; the tests
// assert the vanishing rather than assume it.  (lhs/rhs)^(1/p) is the
// reported ratio: bounded in the map's convexity exponent range, divergent
// below it.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "heislab/embed.hpp"
#include "heislab/laakso.hpp"
#include "heislab/rng.hpp"

namespace heislab {

// The walk's state space and transition structure, derived from a graph.
// Transition rule: from v, step to up[v][0] or up[v][1] with probability 1/2
// each when both exist, else to up[v][0]; probabilities sum to 1 at every
// non-absorbed state.
struct ChainSpec {
  const LaaksoGraph* graph = nullptr;
  std::int64_t t_min = -1;
  std::int64_t t_max = 0;  // 6^m
  std::string tag;
  std::vector<std::int32_t> height;       // distance from the source, per vertex
  std::vector<std::array<Vertex, 2>> up;  // ascending ids; [1] = -1 if single
  std::vector<std::vector<Vertex>> levels;  // vertices at each height, ascending
};

// Builds the chain for a level >= 1 graph.  Throws std::invalid_argument
// below level 1.
ChainSpec laakso_chain(const LaaksoGraph& g);

// Positions at times 0..t_max inclusive.
using Trajectory = std::vector<Vertex>;

// One full walk; a coin is consumed only at two-way forks, in step order,
// with a 0-bit taking the lower-id branch.
Trajectory sample_trajectory(const ChainSpec& spec, CounterRng* rng);

// Copy of `base` through time s, resampled independently afterwards.
// s must lie within [t_min, t_max] (std::out_of_range otherwise);
// s = t_max returns base unchanged and consumes no randomness, s <= 0 is a
// fresh independent sample.
Trajectory fork_chain(const ChainSpec& spec, const Trajectory& base,
                      std::int64_t s, CounterRng* rng);

// Distance between the images of two vertices under whatever map is being
// tested; the functional sees the map only through these values.
using VertexMetric = std::function<double(Vertex, Vertex)>;

// Identity map into the graph's own metric.  Captures g by reference.
VertexMetric graph_metric(const LaaksoGraph& g);
// Distances between embedded positions.  Captures the map by reference.
VertexMetric image_metric(const EmbeddedMap& map);

struct MarkovEstimate {
  int level = 0;
  double p = 0.0;
  std::string mode;  // "exact" or "montecarlo"
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio_pi = 0.0;  // (lhs/rhs)^(1/p), 0 when either side vanishes
  std::int64_t samples = 0;   // montecarlo only
  std::uint64_t seed = 0;     // montecarlo only
  double std_error = 0.0;     // montecarlo only: standard error of lhs
};

// Largest k the functional needs: 2^k <= 2 * 6^m.  Terms beyond are
// identically zero, which the tests assert by evaluating them.
std::int64_t k_limit(const ChainSpec& spec);

// Exact evaluation by dynamic programming over the per-height distributions:
// the forward marginals pi_t, and for the coupled terms the conditional
// transition rows propagated 2^k steps from each branch state.  Deterministic
// for any thread count.  Throws std::invalid_argument for p < 1 or an empty
// horizon.
MarkovEstimate functional_exact(const ChainSpec& spec, const VertexMetric& f,
                                double p, unsigned threads = 0);

// Monte Carlo evaluation over sampled trajectory pairs: per sample one
// independent companion walk serves the fully-independent terms and a fresh
// branch continuation is walked for every coupled (k, s) term.  Stream
// discipline: one substream per work chunk derived from (seed, chunk index),
// so estimates are byte-identical for any thread count.  std_error is the
// sample standard error of lhs.
MarkovEstimate functional_mc(const ChainSpec& spec, const VertexMetric& f,
                             double p, std::int64_t samples,
                             std::uint64_t seed, unsigned threads = 0);

// The k-th summand of lhs, weight included: 2^(-kp) sum_t E[...].  Exact;
// valid for any k >= 0 (structurally zero beyond k_limit).
double unrestricted_drift_term(const ChainSpec& spec, const VertexMetric& f,
                               double p, std::int64_t k, unsigned threads = 0);

// Calmer time windows for the k-th term, k >= 1: closed integer intervals
// [6^(h+1) i + 6^h + 6^(h-1), 6^(h+1) i + 6^h + 2*6^(h-1)] for
// i = 1 .. 6^(m-h-1) - 1, where h is the smallest integer with 6^h >= 2^k.
// Empty when 2^k is too large for the level.
std::vector<std::pair<std::int64_t, std::int64_t>> drift_windows(
    int level, std::int64_t k);

// The k-th term restricted to those windows; at most the unrestricted term.
double restricted_drift_sum(const ChainSpec& spec, const VertexMetric& f,
                            double p, std::int64_t k, unsigned threads = 0);

}  // namespace heislab
