#include "heislab/distortion.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heislab/parallel.hpp"
#include "heislab/rng.hpp"

namespace heislab {
namespace {

struct Extremes {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  RatioWitness min_witness;
  RatioWitness max_witness;
  std::int64_t pairs = 0;
};

bool lex_before(Vertex au, Vertex av, Vertex bu, Vertex bv) {
  return au != bu ? au < bu : av < bv;
}

void fold_ratio(Extremes* acc, double ratio, Vertex u, Vertex v) {
  ++acc->pairs;
  if (ratio < acc->min_ratio ||
      (ratio == acc->min_ratio &&
       lex_before(u, v, acc->min_witness.u, acc->min_witness.v))) {
    acc->min_ratio = ratio;
    acc->min_witness = {u, v, ratio};
  }
  if (ratio > acc->max_ratio ||
      (ratio == acc->max_ratio &&
       lex_before(u, v, acc->max_witness.u, acc->max_witness.v))) {
    acc->max_ratio = ratio;
    acc->max_witness = {u, v, ratio};
  }
}

Extremes merge(Extremes a, const Extremes& b) {
  if (b.pairs == 0) return a;
  if (a.pairs == 0) return b;
  a.pairs += b.pairs;
  if (b.min_ratio < a.min_ratio ||
      (b.min_ratio == a.min_ratio &&
       lex_before(b.min_witness.u, b.min_witness.v, a.min_witness.u,
                  a.min_witness.v))) {
    a.min_ratio = b.min_ratio;
    a.min_witness = b.min_witness;
  }
  if (b.max_ratio > a.max_ratio ||
      (b.max_ratio == a.max_ratio &&
       lex_before(b.max_witness.u, b.max_witness.v, a.max_witness.u,
                  a.max_witness.v))) {
    a.max_ratio = b.max_ratio;
    a.max_witness = b.max_witness;
  }
  return a;
}

DistortionReport finish(const Extremes& ex, const char* mode) {
  DistortionReport r;
  r.mode = mode;
  r.pairs = ex.pairs;
  if (ex.pairs == 0) return r;
  r.min_ratio = ex.min_ratio;
  r.max_ratio = ex.max_ratio;
  r.min_witness = ex.min_witness;
  r.max_witness = ex.max_witness;
  r.infinite = ex.min_ratio == 0.0;
  r.distortion = r.infinite ? std::numeric_limits<double>::infinity()
                            : ex.max_ratio / ex.min_ratio;
  return r;
}

unsigned resolve_threads(unsigned threads) {
  return threads == 0 ? default_thread_count() : threads;
}

TargetMetric map_metric(const EmbeddedMap& map) {
  return [&map](Vertex u, Vertex v) { return map.target_distance(u, v); };
}

}  // namespace

DistortionReport measure_distortion(const LaaksoGraph& g,
                                    const TargetMetric& target,
                                    unsigned threads) {
  const std::int64_t nv = g.vertex_count();
  const std::int64_t total_pairs = nv * (nv - 1) / 2;
  if (total_pairs > kExactPairCap) {
    throw std::length_error(
        "exact distortion would examine " + std::to_string(total_pairs) +
        " vertex pairs, above the cap of " + std::to_string(kExactPairCap) +
        "; use sampled mode instead");
  }
  const Extremes ex = parallel_reduce(
      static_cast<std::uint64_t>(nv), resolve_threads(threads), Extremes{},
      [&](std::size_t, std::uint64_t b, std::uint64_t e) {
        Extremes part;
        std::vector<std::int32_t> row;
        for (std::uint64_t s = b; s < e; ++s) {
          const auto u = static_cast<Vertex>(s);
          g.bfs_from(u, &row);
          for (std::int64_t t = static_cast<std::int64_t>(s) + 1; t < nv; ++t) {
            const auto v = static_cast<Vertex>(t);
            const double ratio =
                target(u, v) /
                static_cast<double>(row[static_cast<std::size_t>(t)]);
            fold_ratio(&part, ratio, u, v);
          }
        }
        return part;
      },
      merge);
  return finish(ex, "exact");
}

DistortionReport measure_distortion(const LaaksoGraph& g,
                                    const EmbeddedMap& map, unsigned threads) {
  return measure_distortion(g, map_metric(map), threads);
}

DistortionReport sample_distortion(const LaaksoGraph& g,
                                   const TargetMetric& target,
                                   std::int64_t samples, std::uint64_t seed,
                                   unsigned threads) {
  if (samples < 0) throw std::invalid_argument("sample count must be >= 0");
  const std::int64_t nv = g.vertex_count();
  if (nv < 2) throw std::invalid_argument("graph has no vertex pairs");
  const CounterRng base(seed);
  const Extremes ex = parallel_reduce(
      static_cast<std::uint64_t>(samples), resolve_threads(threads),
      Extremes{},
      [&](std::size_t chunk, std::uint64_t b, std::uint64_t e) {
        Extremes part;
        CounterRng rng = base.fork(chunk);
        for (std::uint64_t s = b; s < e; ++s) {
          auto u = static_cast<Vertex>(
              rng.next_below(static_cast<std::uint64_t>(nv)));
          auto v = static_cast<Vertex>(
              rng.next_below(static_cast<std::uint64_t>(nv - 1)));
          if (v >= u) ++v;
          if (u > v) std::swap(u, v);
          const double ratio =
              target(u, v) / static_cast<double>(g.distance(u, v));
          fold_ratio(&part, ratio, u, v);
        }
        return part;
      },
      merge);
  DistortionReport r = finish(ex, "sampled");
  r.samples = samples;
  r.seed = seed;
  return r;
}

DistortionReport sample_distortion(const LaaksoGraph& g, const EmbeddedMap& map,
                                   std::int64_t samples, std::uint64_t seed,
                                   unsigned threads) {
  return sample_distortion(g, map_metric(map), samples, seed, threads);
}

double growth_envelope(int level, double m_param) {
  const double a = m_param + level;
  if (!(a > 1.0)) {
    throw std::domain_error("growth_envelope requires m_param + level > 1");
  }
  return std::pow(a, 0.25) * std::sqrt(std::log2(a));
}

double restricted_lower_ratio(const LaaksoGraph& g, const EmbeddedMap& map,
                              unsigned threads) {
  if (g.level() < 1) {
    throw std::invalid_argument("restricted_lower_ratio requires level >= 1");
  }
  const std::int64_t nv = g.vertex_count();
  // Level-1 ancestry as a 10-bit mask per vertex; pairs are admissible when
  // the masks do not intersect.
  std::vector<std::uint16_t> mask(static_cast<std::size_t>(nv), 0);
  for (std::int64_t v = 0; v < nv; ++v) {
    for (const std::int64_t e : g.touching_edges(1, static_cast<Vertex>(v))) {
      mask[static_cast<std::size_t>(v)] |=
          static_cast<std::uint16_t>(1u << static_cast<unsigned>(e));
    }
  }
  const Extremes ex = parallel_reduce(
      static_cast<std::uint64_t>(nv), resolve_threads(threads), Extremes{},
      [&](std::size_t, std::uint64_t b, std::uint64_t e) {
        Extremes part;
        std::vector<std::int32_t> row;
        for (std::uint64_t s = b; s < e; ++s) {
          const auto u = static_cast<Vertex>(s);
          const std::uint16_t mu = mask[static_cast<std::size_t>(s)];
          g.bfs_from(u, &row);
          for (std::int64_t t = static_cast<std::int64_t>(s) + 1; t < nv; ++t) {
            if ((mu & mask[static_cast<std::size_t>(t)]) != 0) continue;
            const auto v = static_cast<Vertex>(t);
            const double ratio =
                map.target_distance(u, v) /
                static_cast<double>(row[static_cast<std::size_t>(t)]);
            fold_ratio(&part, ratio, u, v);
          }
        }
        return part;
      },
      merge);
  if (ex.pairs == 0) {
    throw std::logic_error("no admissible vertex pairs");
  }
  return ex.min_ratio;
}

}  // namespace heislab
