#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace mobsamp {

/// Process-wide worker count for block-parallel Monte Carlo loops (default 1).
/// Results never depend on it: work is split into fixed blocks, each block
/// draws from its own substream, and partials are reduced in block order.
void set_worker_threads(int n);
int worker_threads();

inline constexpr std::size_t kBlockSize = 1024;

inline std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

/// Runs fn(block) for block in [0, n_blocks) on the worker pool.
void for_each_block(std::size_t n_blocks, const std::function<void(std::size_t)>& fn);

template <class Partial, class Fn>
std::vector<Partial> map_blocks(std::size_t n_blocks, Fn&& fn) {
  std::vector<Partial> out(n_blocks);
  for_each_block(n_blocks, [&](std::size_t b) { out[b] = fn(b); });
  return out;
}

/// Welford accumulator with an order-sensitive merge.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double standard_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

}  // namespace mobsamp
