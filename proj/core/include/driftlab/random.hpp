#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

namespace driftlab {

/// Identity of a reproducible random stream.
///
/// A stream is a value, not a generator: every sampler builds its own engine
/// from it, so the same (master_seed, stream_id) always yields the same draws.
/// Nested scopes (replicate -> duration draws / shock draws) are derived with
/// substream(), which hashes the child index into a fresh stream_id.
struct RandomStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  [[nodiscard]] RandomStream substream(std::uint64_t index) const noexcept;

  friend bool operator==(const RandomStream&, const RandomStream&) = default;
};

/// Philox4x32-10 counter-based generator.
///
/// Key = master seed, counter = (block index, stream id). Distinct stream ids
/// address disjoint counter ranges, so streams never overlap.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  explicit Philox4x32(const RandomStream& stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  std::uint64_t block_index_ = 0;
  int used_ = 4;
};

/// Variate generation on top of Philox4x32. The transforms are written out
/// here rather than taken from <random> so that draws are bit-identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(const RandomStream& stream) noexcept : engine_(stream) {}

  std::uint64_t bits() noexcept { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Standard exponential.
  double exponential() noexcept;
  /// Standard Gaussian (Box-Muller, pairs cached).
  double normal() noexcept;
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  Philox4x32 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace driftlab
