#pragma once

// Counter-based generator: Philox4x32 with 10 rounds.
// A draw is a pure function of (key, counter), so any path's stream can be
// produced independently of every other path and of the thread layout.

#include <array>
#include <cstdint>

namespace brownruin {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter bijection(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Sequential 32-bit draws from one stream: block b of stream k is
/// bijection({b_lo, b_hi, k_lo, k_hi}, seed). Satisfies
/// UniformRandomBitGenerator.
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  PhiloxEngine(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

  result_type operator()() noexcept {
    if (next_ == 4) {
      buffer_ = Philox4x32::bijection(
          {static_cast<std::uint32_t>(block_),
           static_cast<std::uint32_t>(block_ >> 32), stream_lo_, stream_hi_},
          key_);
      ++block_;
      next_ = 0;
    }
    return buffer_[next_++];
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int next_ = 4;
};

}  // namespace brownruin
