#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace rrobust {

/// Finds the smallest index in [0, count) for which eval(worker, index)
/// reports a hit. Indices are handed out in ascending chunks; once a hit is
/// known, chunks past it are skipped. The result does not depend on the
/// worker count. eval must be safe to call concurrently for distinct workers.
///
/// With no hit, every index has been evaluated exactly once.
template <typename Eval>
std::optional<std::uint64_t> first_hit(std::uint64_t count, unsigned workers, Eval&& eval) {
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  workers = std::max(1u, workers);
  const std::uint64_t chunk = std::clamp<std::uint64_t>(count / (std::uint64_t{workers} * 16), 1, 256);

  std::atomic<std::uint64_t> cursor{0};
  std::atomic<std::uint64_t> best{kNone};

  auto run = [&](unsigned worker) {
    for (;;) {
      const std::uint64_t begin = cursor.fetch_add(chunk);
      if (begin >= count || begin >= best.load(std::memory_order_relaxed)) return;
      const std::uint64_t end = std::min(count, begin + chunk);
      for (std::uint64_t i = begin; i < end; ++i) {
        if (i >= best.load(std::memory_order_relaxed)) return;
        if (eval(worker, i)) {
          std::uint64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          return;
        }
      }
    }
  };

  if (workers == 1 || count <= chunk) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  const std::uint64_t found = best.load();
  if (found == kNone) return std::nullopt;
  return found;
}

}  // namespace rrobust
