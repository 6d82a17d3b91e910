#pragma once

#include <cstdint>

// Counter-based deterministic random draws.  Every value is a pure function
// of (seed, stream, index, attempt), so a draw "exists" for each key whether
// or not the caller ends up using it, and draws are independent of iteration
// order.  The mixer is the splitmix64 finalizer applied as an absorb chain.

namespace bnm {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t k1,
                                         std::uint64_t k2,
                                         std::uint64_t k3) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ k1);
  h = splitmix64(h ^ k2);
  h = splitmix64(h ^ k3);
  return h;
}

// Uniform integer on [0, n) keyed by (seed, stream, index).  Unbiased:
// multiply-shift with rejection of the short low-word zone (no modulo bias).
// Rejections advance the attempt counter, so the result stays a pure
// function of the key.
inline std::uint32_t uniform_below(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index,
                                   std::uint32_t n) noexcept {
  const std::uint64_t threshold = (0 - std::uint64_t{n}) % n;  // 2^64 mod n
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t r = keyed_u64(seed, stream, index, attempt);
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(r) * static_cast<unsigned __int128>(n);
    if (static_cast<std::uint64_t>(wide) >= threshold) {
      return static_cast<std::uint32_t>(wide >> 64);
    }
  }
}

// Per-trial seed derivation used by the CLI's Monte Carlo driver.
inline constexpr std::uint64_t kTrialStream = 0x747269616c730000ULL;

inline constexpr std::uint64_t derive_trial_seed(std::uint64_t seed,
                                                 std::uint64_t trial) noexcept {
  return keyed_u64(seed, kTrialStream, trial, 0);
}

}  // namespace bnm
