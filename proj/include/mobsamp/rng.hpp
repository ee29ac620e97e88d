#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace mobsamp {

/// Counter-based generator: Philox4x32-10 keyed by the 64-bit seed, with a
/// 128-bit counter laid out as (position: 64 bits, stream: 64 bits).
///
/// Every draw is a pure function of (seed, stream, position), so substreams
/// can be handed to worker blocks and the combined result does not depend on
/// how the blocks were scheduled.
class CounterRng {
 public:
  static constexpr std::string_view kName = "philox4x32-10/mobsamp-rng-v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal (Box-Muller; the second variate is cached).
  double normal();

  /// Independent generator for block `index`; does not advance this one.
  CounterRng substream(std::uint64_t index) const;

  /// Fresh generator keyed off the next draw of this one.
  CounterRng fork();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mobsamp
