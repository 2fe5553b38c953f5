#pragma once

// Counter-based random streams (Philox4x32-10, Salmon et al., SC'11).
//
// A stream is the pair (key, substream id); its n-th 128-bit block is the
// Philox bijection of the counter (n, id). Streams with different ids never
// overlap, so work can be split across threads in any order and still
// reproduce the same draws.

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace hypgauss {

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

} // namespace detail

/// One reproducible random stream. Satisfies UniformRandomBitGenerator.
///
/// Not thread-safe; give each worker its own stream.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t substream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          id_(substream) {}

    /// Stream for a two-level index, e.g. (signal, trial block).
    static RngStream substream(std::uint64_t seed, std::uint32_t major, std::uint32_t minor) noexcept {
        return RngStream(seed, (static_cast<std::uint64_t>(major) << 32) | minor);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (used_ == 2) refill();
        return buffer_[used_++];
    }

    /// Uniform double in the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal deviate.
    double normal() { return normal_(*this); }

    std::uint64_t blocks_used() const noexcept { return counter_; }

private:
    void refill() noexcept {
        const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_),
                                               static_cast<std::uint32_t>(counter_ >> 32),
                                               static_cast<std::uint32_t>(id_),
                                               static_cast<std::uint32_t>(id_ >> 32)};
        const auto out = detail::philox4x32_10(ctr, key_);
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        ++counter_;
        used_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t id_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int used_ = 2;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace hypgauss
