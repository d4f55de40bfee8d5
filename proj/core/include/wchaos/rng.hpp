#pragma once

#include <cstdint>

// Counter-based splittable random streams (Philox 4x32-10). The
// substream for replica r of a master seed is keyed by
//   key = splitmix64(master_seed) XOR r,
// so distinct replicas of the same master seed can never collide, and a
// stream is a pure function of (seed, replica, counter).

namespace wchaos {

std::uint64_t splitmix64(std::uint64_t x);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t master_seed, std::uint64_t replica);

  /// Next 32 uniform bits.
  std::uint32_t next_u32();
  /// Uniform double in (0, 1), 53-bit resolution, never exactly 0 or 1.
  double next_uniform();
  /// Standard normal via Box-Muller (pairs are cached, so draw counts
  /// are deterministic).
  double next_normal();

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint64_t counter_ = 0;
  std::uint32_t block_[4];
  int block_pos_ = 4;
  double cached_normal_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace wchaos
