#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string_view>

namespace spinnet {

// Identifier recorded in sweep metadata so results can be reproduced later.
inline constexpr std::string_view kRngId = "philox4x32-10";

namespace detail {

// SplitMix64 finalizer. Used to derive Philox keys from (seed, index...) tuples.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace detail

// Philox4x32-10 block cipher (Salmon et al., SC'11). Counter-based: output
// block k is a pure function of (key, k), so streams can be positioned,
// split, and replayed exactly on any platform.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block encrypt(std::uint64_t key, std::uint64_t counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    Block ctr = {static_cast<std::uint32_t>(counter),
                 static_cast<std::uint32_t>(counter >> 32), 0u, 0u};
    for (int round = 0; round < 10; ++round) {
      std::uint32_t lo0, hi0, lo1, hi1;
      detail::mulhilo32(kMul0, ctr[0], lo0, hi0);
      detail::mulhilo32(kMul1, ctr[2], lo1, hi1);
      ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

// A positioned stream of random draws. Each 64-bit draw consumes exactly one
// counter value, so draw_count() doubles as the stream position.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() {
    const auto block = Philox4x32::encrypt(key_, counter_++);
    return (static_cast<std::uint64_t>(block[1]) << 32) | block[0];
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [-0.5, 0.5).
  double next_symmetric() { return next_double() - 0.5; }

  // Zero-mean normal with standard deviation `sigma` (Box-Muller, two draws).
  double next_gaussian(double sigma) {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t draw_count() const { return counter_; }
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Derives a statistically independent stream for each distinct (base_seed,
// indices) tuple; identical inputs give bit-identical streams.
inline RandomStream substream(std::uint64_t base_seed, std::span<const std::uint64_t> indices) {
  std::uint64_t key = detail::mix64(base_seed);
  for (std::uint64_t index : indices) {
    key = detail::mix64(key ^ detail::mix64(index));
  }
  return RandomStream(key);
}

inline RandomStream substream(std::uint64_t base_seed,
                              std::initializer_list<std::uint64_t> indices) {
  return substream(base_seed, std::span<const std::uint64_t>(indices.begin(), indices.size()));
}

}  // namespace spinnet
