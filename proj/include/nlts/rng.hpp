#pragma once

#include <array>
#include <cstdint>

#include "nlts/params.hpp"

namespace nlts {

/// Philox4x32-10 counter-based generator (Salmon et al.). A block of four
/// 32-bit words is a pure function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Sequential draws for one (seed, stream, index) cell. Every simulated time
/// step owns a cell, so draws at step t never depend on how many draws
/// earlier steps consumed.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) noexcept;

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() noexcept;
  double normal() noexcept;
  /// Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape) noexcept;
  /// Inversion below 30, PTRS rejection above.
  std::int64_t poisson(double lambda) noexcept;
  /// One standardized innovation.
  double innovation(const InnovationSpec& spec) noexcept;

 private:
  std::uint64_t next64() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

/// Stream identifiers. Simulated paths use ids below 2^24 (the path id);
/// the other purposes live above so they never collide with a path.
namespace streams {
inline constexpr std::uint32_t path_mask = 0x00FFFFFFu;
inline constexpr std::uint32_t starts = 0x01000000u;
inline constexpr std::uint32_t monte_carlo = 0x02000000u;
inline constexpr std::uint32_t sweep = 0x03000000u;
inline constexpr std::uint32_t probes = 0x04000000u;
}  // namespace streams

}  // namespace nlts
