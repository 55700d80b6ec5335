#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace dephasim {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Stateless keyed bijection: the same (key, counter) always produces
/// the same block, which is what makes parallel trajectory streams
/// reproducible by construction.
struct Philox4x32 {
    static constexpr std::uint32_t w32_a = 0x9E3779B9u;
    static constexpr std::uint32_t w32_b = 0xBB67AE85u;
    static constexpr std::uint32_t m4x32_a = 0xD2511F53u;
    static constexpr std::uint32_t m4x32_b = 0xCD9E8D57u;

    static std::array<std::uint32_t, 4> block(
        std::array<std::uint32_t, 4> counter,
        std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 =
                static_cast<std::uint64_t>(m4x32_a) * counter[0];
            const std::uint64_t p1 =
                static_cast<std::uint64_t>(m4x32_b) * counter[2];
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            counter = {hi1 ^ counter[1] ^ key[0], lo1,
                       hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += w32_a;
            key[1] += w32_b;
        }
        return counter;
    }
};

/// Buffered draw stream over Philox blocks. A stream is addressed by
/// (seed, stream id); block index counts the draws. Identical
/// construction yields an identical sequence on every run and thread.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    std::uint64_t next_u64() {
        if (word_ >= 4) {
            buffer_ = Philox4x32::block(
                {static_cast<std::uint32_t>(block_),
                 static_cast<std::uint32_t>(block_ >> 32),
                 static_cast<std::uint32_t>(stream_),
                 static_cast<std::uint32_t>(stream_ >> 32)},
                key_);
            ++block_;
            word_ = 0;
        }
        const std::uint64_t hi = buffer_[word_];
        const std::uint64_t lo = buffer_[word_ + 1];
        word_ += 2;
        return (hi << 32) | lo;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; exact draw count per pair, so
    /// the stream position stays deterministic.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 =
            (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int word_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dephasim
