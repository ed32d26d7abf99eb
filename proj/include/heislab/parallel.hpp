#pragma once

// Deterministic fork-join over an index range.
//
// The range is cut into fixed-size chunks whose boundaries depend only on the
// item count, never on the thread count. Workers pull chunks from an atomic
// cursor; per-chunk results are stored by chunk index and reduced in chunk
// order afterwards. Output is therefore byte-identical for any --threads
// value, which the CLI determinism guarantee relies on.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace heislab {

inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Calls body(chunk_index, begin, end) for consecutive chunks covering
// [0, count). Chunk boundaries depend only on count. Returns the number of
// chunks. The body must not touch shared mutable state except through its
// chunk slot.
template <class Body>
std::size_t parallel_chunks(std::uint64_t count, unsigned threads, Body&& body) {
  if (count == 0) return 0;
  if (threads == 0) threads = 1;
  // Aim for enough chunks to load-balance, but make the grid a pure function
  // of count: 256 chunks minimum granularity 1024 items.
  const std::uint64_t chunk_size = std::max<std::uint64_t>(1024, (count + 255) / 256);
  const std::size_t n_chunks = static_cast<std::size_t>((count + chunk_size - 1) / chunk_size);

  if (threads == 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::uint64_t b = static_cast<std::uint64_t>(c) * chunk_size;
      body(c, b, std::min(count, b + chunk_size));
    }
    return n_chunks;
  }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = cursor.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      const std::uint64_t b = static_cast<std::uint64_t>(c) * chunk_size;
      body(c, b, std::min(count, b + chunk_size));
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(n_chunks));
  pool.reserve(n_workers);
  for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return n_chunks;
}

// Map-reduce convenience: body(chunk_index, begin, end) -> T, reduced with
// combine in chunk order starting from init.
template <class T, class Body, class Combine>
T parallel_reduce(std::uint64_t count, unsigned threads, T init, Body&& body, Combine&& combine) {
  if (count == 0) return init;
  std::vector<T> slots;
  // First pass computes the chunk count cheaply (same formula as above).
  const std::uint64_t chunk_size = std::max<std::uint64_t>(1024, (count + 255) / 256);
  const std::size_t n_chunks = static_cast<std::size_t>((count + chunk_size - 1) / chunk_size);
  slots.resize(n_chunks, init);
  parallel_chunks(count, threads, [&](std::size_t c, std::uint64_t b, std::uint64_t e) {
    slots[c] = body(c, b, e);
  });
  T acc = init;
  for (const T& s : slots) acc = combine(acc, s);
  return acc;
}

}  // namespace heislab
