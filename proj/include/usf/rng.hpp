#pragma once

#include <cstdint>

namespace usf {

/**
 * Splittable counter-based generator. A stream is identified by (seed, stream);
 * the trajectory is a pure function of that pair, so Monte-Carlo sample i can
 * use stream id i and parallel/serial runs produce identical sample sets.
 *
 * Core is the splitmix64 sequence: state advances by a fixed odd constant and
 * the output is a strong 64-bit mix of the counter.
 */
class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(derive_key(seed, stream)) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0,1) with 53 random bits
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in {0, ..., n-1}, n >= 1 (Lemire rejection method)
    std::uint32_t next_below(std::uint32_t n) noexcept {
        std::uint64_t x = next_u64() & 0xffffffffULL;
        std::uint64_t m = x * n;
        auto lo = static_cast<std::uint32_t>(m);
        if (lo < n) {
            std::uint32_t t = (~n + 1u) % n;
            while (lo < t) {
                x = next_u64() & 0xffffffffULL;
                m = x * n;
                lo = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) noexcept {
        // two mix rounds decorrelate nearby (seed, stream) pairs
        std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ULL);
        k = mix(k ^ (stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL));
        return k;
    }

    std::uint64_t state_;
};

} // namespace usf
