// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstdint>

namespace mbm {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC'11).
/// A keyed bijection on 128-bit counters: the i-th output block is a pure function of (key, i).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  [[nodiscard]] static Counter apply(Counter ctr, Key key) noexcept;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Standard normals for one stream. Key = splitmix64(seed); counter = (draw block, stream index),
/// so every variate is a fixed function of (seed, stream, position) whatever thread produces it.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Uniform on the open interval (0,1) with 53 random bits.
  [[nodiscard]] double uniform() noexcept;
  /// Inverse-CDF standard normal.
  [[nodiscard]] double normal();

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Φ^{-1}(p) for p in (0,1).
[[nodiscard]] double normal_quantile(double p);

}  // namespace mbm
