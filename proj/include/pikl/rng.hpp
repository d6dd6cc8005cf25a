#pragma once

#include <cstdint>

namespace pikl {

/// Counter-based generator: draw i of stream `seed` is a pure function of
/// (seed, i), so results do not depend on the standard library's
/// distribution implementations or on the platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one draw per call, two uniforms).
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

  /// Stateless access: the value at position `index` of the stream.
  static std::uint64_t at(std::uint64_t key, std::uint64_t index) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pikl
