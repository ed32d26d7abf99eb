#include "heislab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "heislab/parallel.hpp"

namespace heislab {
namespace {

// Neumaier-compensated accumulator; used wherever a sum feeds a reported
// value, so results do not depend on summation luck.
struct Kahan {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double get() const { return s + c; }
};

void validate_chain(const ChainSpec& spec) {
  if (spec.graph == nullptr || spec.t_max <= spec.t_min || spec.t_max < 1 ||
      spec.height.empty() || spec.up.empty() || spec.levels.empty()) {
    throw std::invalid_argument("empty or malformed chain");
  }
}

void validate_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
}

unsigned resolve_threads(unsigned threads) {
  return threads == 0 ? default_thread_count() : threads;
}

double eval_pow(const VertexMetric& f, double p, Vertex u, Vertex v) {
  if (u == v) return 0.0;
  if (u > v) std::swap(u, v);
  return std::pow(f(u, v), p);
}

Vertex step_up(const ChainSpec& spec, Vertex v, CounterRng* rng) {
  const auto& u = spec.up[static_cast<std::size_t>(v)];
  if (u[1] < 0) return u[0];
  return rng->next_bit() ? u[1] : u[0];
}

void fill_walk(const ChainSpec& spec, Trajectory* out, CounterRng* rng) {
  out->resize(static_cast<std::size_t>(spec.t_max) + 1);
  Vertex v = spec.graph->source();
  (*out)[0] = v;
  for (std::int64_t t = 1; t <= spec.t_max; ++t) {
    v = step_up(spec, v, rng);
    (*out)[static_cast<std::size_t>(t)] = v;
  }
}

// Exact-evaluation tables: forward marginals, per-height up-step targets as
// level-local indices, and per-height pair-power matrices.
struct Dp {
  const ChainSpec* spec = nullptr;
  std::int64_t H = 0;
  std::vector<std::vector<double>> pi;
  std::vector<std::vector<std::int32_t>> upidx;  // 2 slots per level index
  std::vector<std::vector<double>> dmat;         // w*w, symmetric, 0 diagonal
};

Dp build_dp(const ChainSpec& spec, const VertexMetric& f, double p) {
  Dp dp;
  dp.spec = &spec;
  dp.H = spec.t_max;
  const auto nh = static_cast<std::size_t>(dp.H) + 1;
  // Level-local index of every vertex.
  std::vector<std::int32_t> pos(spec.height.size(), -1);
  for (std::size_t h = 0; h < nh; ++h) {
    const auto& lv = spec.levels[h];
    for (std::size_t i = 0; i < lv.size(); ++i) {
      pos[static_cast<std::size_t>(lv[i])] = static_cast<std::int32_t>(i);
    }
  }
  dp.upidx.resize(nh);
  for (std::size_t h = 0; h + 1 < nh; ++h) {
    const auto& lv = spec.levels[h];
    auto& ui = dp.upidx[h];
    ui.assign(2 * lv.size(), -1);
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const auto& u = spec.up[static_cast<std::size_t>(lv[i])];
      ui[2 * i] = pos[static_cast<std::size_t>(u[0])];
      if (u[1] >= 0) ui[2 * i + 1] = pos[static_cast<std::size_t>(u[1])];
    }
  }
  dp.pi.resize(nh);
  dp.pi[0] = {1.0};
  for (std::size_t h = 0; h + 1 < nh; ++h) {
    const auto& cur = dp.pi[h];
    auto& nxt = dp.pi[h + 1];
    nxt.assign(spec.levels[h + 1].size(), 0.0);
    const auto& ui = dp.upidx[h];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double q = cur[i];
      const std::int32_t i0 = ui[2 * i];
      const std::int32_t i1 = ui[2 * i + 1];
      if (i1 < 0) {
        nxt[static_cast<std::size_t>(i0)] += q;
      } else {
        nxt[static_cast<std::size_t>(i0)] += 0.5 * q;
        nxt[static_cast<std::size_t>(i1)] += 0.5 * q;
      }
    }
  }
  dp.dmat.resize(nh);
  for (std::size_t h = 0; h < nh; ++h) {
    const auto& lv = spec.levels[h];
    const std::size_t w = lv.size();
    auto& d = dp.dmat[h];
    d.assign(w * w, 0.0);
    for (std::size_t i = 0; i < w; ++i) {
      for (std::size_t j = i + 1; j < w; ++j) {
        const double v = eval_pow(f, p, lv[i], lv[j]);
        d[i * w + j] = v;
        d[j * w + i] = v;
      }
    }
  }
  return dp;
}

// E[d^p] at time t for two fully independent copies.
double indep_term(const Dp& dp, std::int64_t t) {
  if (t < 1 || t > dp.H - 1) return 0.0;
  const auto& q = dp.pi[static_cast<std::size_t>(t)];
  const auto& d = dp.dmat[static_cast<std::size_t>(t)];
  const std::size_t w = q.size();
  double total = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < w; ++j) row += d[i * w + j] * q[j];
    total += q[i] * row;
  }
  return total;
}

// E[d^p] between the chain at time s + 2^k and the copy re-forked at
// s >= 1: propagate each branch state's conditional row 2^k steps, then
// average the pair power against the shared branch distribution.
double coupled_term(const Dp& dp, std::int64_t k, std::int64_t s) {
  const std::int64_t delta = std::int64_t{1} << k;
  const auto& start = dp.pi[static_cast<std::size_t>(s)];
  const std::size_t b = start.size();
  std::size_t wc = b;
  std::vector<double> m(b * b, 0.0);
  for (std::size_t i = 0; i < b; ++i) m[i * b + i] = 1.0;
  std::vector<double> nxt;
  for (std::int64_t j = 0; j < delta; ++j) {
    const auto h = static_cast<std::size_t>(s + j);
    const auto& ui = dp.upidx[h];
    const std::size_t wn = dp.pi[h + 1].size();
    nxt.assign(b * wn, 0.0);
    for (std::size_t row = 0; row < b; ++row) {
      const double* mr = &m[row * wc];
      double* nr = &nxt[row * wn];
      for (std::size_t y = 0; y < wc; ++y) {
        const double a = mr[y];
        if (a == 0.0) continue;
        const std::int32_t i0 = ui[2 * y];
        const std::int32_t i1 = ui[2 * y + 1];
        if (i1 < 0) {
          nr[static_cast<std::size_t>(i0)] += a;
        } else {
          nr[static_cast<std::size_t>(i0)] += 0.5 * a;
          nr[static_cast<std::size_t>(i1)] += 0.5 * a;
        }
      }
    }
    m.swap(nxt);
    wc = wn;
  }
  const auto& d = dp.dmat[static_cast<std::size_t>(s + delta)];
  double total = 0.0;
  for (std::size_t x = 0; x < b; ++x) {
    const double* mx = &m[x * wc];
    double vx = 0.0;
    for (std::size_t i = 0; i < wc; ++i) {
      const double a = mx[i];
      if (a == 0.0) continue;
      const double* dr = &d[i * wc];
      double acc = 0.0;
      for (std::size_t j = 0; j < wc; ++j) acc += dr[j] * mx[j];
      vx += a * acc;
    }
    total += start[x] * vx;
  }
  return total;
}

// sum_t E[...] for one k, unweighted.  Structurally zero once 2^k exceeds
// the horizon length.
double term_sum(const Dp& dp, std::int64_t k, unsigned threads) {
  if (k > 62) return 0.0;
  const std::int64_t delta = std::int64_t{1} << k;
  Kahan total;
  total.add(indep_term(dp, delta - 1));  // fork time -1
  total.add(indep_term(dp, delta));      // fork time 0
  const std::int64_t smax = dp.H - 1 - delta;
  if (smax >= 1) {
    total.add(parallel_reduce(
        static_cast<std::uint64_t>(smax), threads, 0.0,
        [&](std::size_t, std::uint64_t bgn, std::uint64_t end) {
          Kahan part;
          for (std::uint64_t i = bgn; i < end; ++i) {
            part.add(coupled_term(dp, k, static_cast<std::int64_t>(i) + 1));
          }
          return part.get();
        },
        [](double a, double bv) { return a + bv; }));
  }
  return total.get();
}

double exact_rhs(const Dp& dp, const VertexMetric& f, double p) {
  const ChainSpec& spec = *dp.spec;
  Kahan total;
  for (std::int64_t h = 0; h < dp.H; ++h) {
    const auto& lv = spec.levels[static_cast<std::size_t>(h)];
    const auto& q = dp.pi[static_cast<std::size_t>(h)];
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const auto& u = spec.up[static_cast<std::size_t>(lv[i])];
      if (u[1] < 0) {
        total.add(q[i] * eval_pow(f, p, lv[i], u[0]));
      } else {
        total.add(0.5 * q[i] * eval_pow(f, p, lv[i], u[0]));
        total.add(0.5 * q[i] * eval_pow(f, p, lv[i], u[1]));
      }
    }
  }
  return total.get();
}

double ratio_or_zero(double lhs, double rhs, double p) {
  if (!(lhs > 0.0) || !(rhs > 0.0)) return 0.0;
  return std::pow(lhs / rhs, 1.0 / p);
}

}  // namespace

ChainSpec laakso_chain(const LaaksoGraph& g) {
  if (g.level() < 1) {
    throw std::invalid_argument("the walk needs a level >= 1 graph");
  }
  ChainSpec spec;
  spec.graph = &g;
  spec.t_max = pow6(g.level());
  spec.tag = "laakso-G" + std::to_string(g.level());
  const std::int64_t nv = g.vertex_count();
  spec.height.resize(static_cast<std::size_t>(nv));
  spec.up.assign(static_cast<std::size_t>(nv), {Vertex{-1}, Vertex{-1}});
  spec.levels.assign(static_cast<std::size_t>(spec.t_max) + 1, {});
  for (Vertex v = 0; v < nv; ++v) {
    const auto h = static_cast<std::int32_t>(g.distance(g.source(), v));
    spec.height[static_cast<std::size_t>(v)] = h;
    spec.levels[static_cast<std::size_t>(h)].push_back(v);
  }
  for (Vertex v = 0; v < nv; ++v) {
    auto& slots = spec.up[static_cast<std::size_t>(v)];
    for (const Vertex w : g.neighbors(v)) {
      if (spec.height[static_cast<std::size_t>(w)] !=
          spec.height[static_cast<std::size_t>(v)] + 1) {
        continue;
      }
      if (slots[0] < 0) {
        slots[0] = w;
      } else if (slots[1] < 0) {
        slots[1] = w;
      } else {
        throw std::logic_error("vertex with more than two up-neighbors");
      }
    }
    if (slots[1] >= 0 && slots[1] < slots[0]) std::swap(slots[0], slots[1]);
  }
  return spec;
}

Trajectory sample_trajectory(const ChainSpec& spec, CounterRng* rng) {
  validate_chain(spec);
  Trajectory out;
  fill_walk(spec, &out, rng);
  return out;
}

Trajectory fork_chain(const ChainSpec& spec, const Trajectory& base,
                      std::int64_t s, CounterRng* rng) {
  validate_chain(spec);
  if (s < spec.t_min || s > spec.t_max) {
    throw std::out_of_range("fork time outside the horizon");
  }
  if (base.size() != static_cast<std::size_t>(spec.t_max) + 1) {
    throw std::invalid_argument("trajectory length does not match the chain");
  }
  Trajectory out = base;
  const std::int64_t keep = std::max<std::int64_t>(s, 0);
  for (std::int64_t t = keep + 1; t <= spec.t_max; ++t) {
    out[static_cast<std::size_t>(t)] =
        step_up(spec, out[static_cast<std::size_t>(t - 1)], rng);
  }
  return out;
}

VertexMetric graph_metric(const LaaksoGraph& g) {
  return [&g](Vertex u, Vertex v) {
    return static_cast<double>(g.distance(u, v));
  };
}

VertexMetric image_metric(const EmbeddedMap& map) {
  return [&map](Vertex u, Vertex v) { return map.target_distance(u, v); };
}

std::int64_t k_limit(const ChainSpec& spec) {
  validate_chain(spec);
  std::int64_t k = 0;
  while (k < 62 && (std::int64_t{1} << (k + 1)) <= 2 * spec.t_max) ++k;
  return k;
}

MarkovEstimate functional_exact(const ChainSpec& spec, const VertexMetric& f,
                                double p, unsigned threads) {
  validate_chain(spec);
  validate_p(p);
  const unsigned nt = resolve_threads(threads);
  const Dp dp = build_dp(spec, f, p);
  Kahan lhs;
  const std::int64_t klim = k_limit(spec);
  for (std::int64_t k = 0; k <= klim; ++k) {
    lhs.add(std::pow(2.0, -static_cast<double>(k) * p) * term_sum(dp, k, nt));
  }
  MarkovEstimate est;
  est.level = spec.graph->level();
  est.p = p;
  est.mode = "exact";
  est.lhs = lhs.get();
  est.rhs = exact_rhs(dp, f, p);
  est.ratio_pi = ratio_or_zero(est.lhs, est.rhs, p);
  return est;
}

MarkovEstimate functional_mc(const ChainSpec& spec, const VertexMetric& f,
                             double p, std::int64_t samples,
                             std::uint64_t seed, unsigned threads) {
  validate_chain(spec);
  validate_p(p);
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  const unsigned nt = resolve_threads(threads);
  const std::int64_t H = spec.t_max;
  const std::int64_t klim = k_limit(spec);
  std::vector<double> wk(static_cast<std::size_t>(klim) + 1);
  for (std::int64_t k = 0; k <= klim; ++k) {
    wk[static_cast<std::size_t>(k)] =
        std::pow(2.0, -static_cast<double>(k) * p);
  }
  const CounterRng base(seed);

  struct Acc {
    Kahan sv;   // per-sample divergence totals
    Kahan sv2;  // their squares
    Kahan sr;   // per-sample increment totals
  };
  const Acc acc = parallel_reduce(
      static_cast<std::uint64_t>(samples), nt, Acc{},
      [&](std::size_t chunk, std::uint64_t bgn, std::uint64_t end) {
        Acc part;
        CounterRng rng = base.fork(chunk);
        Trajectory x;
        Trajectory y;
        for (std::uint64_t i = bgn; i < end; ++i) {
          fill_walk(spec, &x, &rng);
          fill_walk(spec, &y, &rng);
          double v = 0.0;
          for (std::int64_t k = 0; k <= klim; ++k) {
            const std::int64_t delta = std::int64_t{1} << k;
            const double w = wk[static_cast<std::size_t>(k)];
            // Fork times -1 and 0: the independent companion serves both.
            for (const std::int64_t t : {delta - 1, delta}) {
              if (t >= 1 && t <= H - 1) {
                v += w * eval_pow(f, p, x[static_cast<std::size_t>(t)],
                                  y[static_cast<std::size_t>(t)]);
              }
            }
            // Coupled fork times: walk a fresh continuation per (k, s).
            for (std::int64_t s = 1; s + delta <= H - 1; ++s) {
              Vertex cur = x[static_cast<std::size_t>(s)];
              for (std::int64_t j = 0; j < delta; ++j) {
                cur = step_up(spec, cur, &rng);
              }
              v += w *
                   eval_pow(f, p, x[static_cast<std::size_t>(s + delta)], cur);
            }
          }
          part.sv.add(v);
          part.sv2.add(v * v);
          double r = 0.0;
          for (std::int64_t t = 1; t <= H; ++t) {
            r += eval_pow(f, p, x[static_cast<std::size_t>(t - 1)],
                          x[static_cast<std::size_t>(t)]);
          }
          part.sr.add(r);
        }
        return part;
      },
      [](Acc a, const Acc& b) {
        a.sv.add(b.sv.get());
        a.sv2.add(b.sv2.get());
        a.sr.add(b.sr.get());
        return a;
      });

  const auto n = static_cast<double>(samples);
  const double mean = acc.sv.get() / n;
  MarkovEstimate est;
  est.level = spec.graph->level();
  est.p = p;
  est.mode = "montecarlo";
  est.lhs = mean;
  est.rhs = acc.sr.get() / n;
  est.ratio_pi = ratio_or_zero(est.lhs, est.rhs, p);
  est.samples = samples;
  est.seed = seed;
  if (samples > 1) {
    const double var =
        std::max(0.0, (acc.sv2.get() - n * mean * mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

double unrestricted_drift_term(const ChainSpec& spec, const VertexMetric& f,
                               double p, std::int64_t k, unsigned threads) {
  validate_chain(spec);
  validate_p(p);
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  const Dp dp = build_dp(spec, f, p);
  return std::pow(2.0, -static_cast<double>(k) * p) *
         term_sum(dp, k, resolve_threads(threads));
}

std::vector<std::pair<std::int64_t, std::int64_t>> drift_windows(
    int level, std::int64_t k) {
  if (level < 1) throw std::invalid_argument("windows need level >= 1");
  if (k < 1) throw std::invalid_argument("windows are defined for k >= 1");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (k > 62) return out;
  // Smallest h with 6^h >= 2^k, found in exact integer arithmetic.
  std::int64_t h = 0;
  std::int64_t p6 = 1;
  while (p6 < (std::int64_t{1} << k)) {
    p6 *= 6;
    ++h;
  }
  if (level - h - 1 < 1) return out;
  const std::int64_t imax = pow6(static_cast<int>(level - h - 1)) - 1;
  const std::int64_t lo = pow6(static_cast<int>(h - 1));
  const std::int64_t mid = pow6(static_cast<int>(h));
  const std::int64_t stride = pow6(static_cast<int>(h + 1));
  for (std::int64_t i = 1; i <= imax; ++i) {
    const std::int64_t a = stride * i + mid + lo;
    out.emplace_back(a, a + lo);
  }
  return out;
}

double restricted_drift_sum(const ChainSpec& spec, const VertexMetric& f,
                            double p, std::int64_t k, unsigned threads) {
  validate_chain(spec);
  validate_p(p);
  if (k < 1) throw std::invalid_argument("restricted sums need k >= 1");
  const auto windows = drift_windows(spec.graph->level(), k);
  if (windows.empty()) return 0.0;
  const std::int64_t delta = std::int64_t{1} << k;
  std::vector<std::int64_t> times;
  for (const auto& [a, bnd] : windows) {
    for (std::int64_t t = a; t <= bnd; ++t) {
      // Window times always sit strictly inside the horizon with a fork
      // time >= 1; guard anyway so a malformed window cannot fault.
      if (t - delta >= 1 && t <= spec.t_max - 1) times.push_back(t);
    }
  }
  const Dp dp = build_dp(spec, f, p);
  const double sum = parallel_reduce(
      static_cast<std::uint64_t>(times.size()), resolve_threads(threads), 0.0,
      [&](std::size_t, std::uint64_t bgn, std::uint64_t end) {
        Kahan part;
        for (std::uint64_t i = bgn; i < end; ++i) {
          part.add(coupled_term(dp, k, times[i] - delta));
        }
        return part.get();
      },
      [](double a, double bv) { return a + bv; });
  return std::pow(2.0, -static_cast<double>(k) * p) * sum;
}

}  // namespace heislab
