#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rsasian {

/// Philox4x32-10 counter-based generator: a keyed bijection of a 128-bit
/// counter, so any draw of any path is addressable without shared state.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t key)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

  Block operator()(Block ctr) const {
    std::array<std::uint32_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
      k[0] += kW0;
      k[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
  std::array<std::uint32_t, 2> key_;
};

/// Sequential draws from one (path, stream) pair. The counter is
/// (path low, path high, stream, block index).
class PathStream {
 public:
  PathStream(const Philox4x32& gen, std::uint64_t path, std::uint32_t stream)
      : gen_(gen),
        path_lo_(static_cast<std::uint32_t>(path)),
        path_hi_(static_cast<std::uint32_t>(path >> 32)),
        stream_(stream) {}

  /// Uniform on the open interval (0, 1) with 32 bits of resolution.
  double uniform() {
    if (used_ == 4) refill();
    return (static_cast<double>(block_[used_++]) + 0.5) * 0x1p-32;
  }

  double exponential() { return -std::log(uniform()); }

  /// Standard normal by Box-Muller; both variates of a pair are used.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  void refill() {
    block_ = gen_({path_lo_, path_hi_, stream_, block_index_++});
    used_ = 0;
  }

  const Philox4x32& gen_;
  std::uint32_t path_lo_, path_hi_, stream_;
  std::uint32_t block_index_ = 0;
  Philox4x32::Block block_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rsasian
