#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bml {

// splitmix64 stream. The sampling procedures below are part of the
// reproducibility contract: changing them changes every seeded result.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection of the biased low range.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

private:
    std::uint64_t state_;
};

// Seed tweak for the second (blue) stream of a junction sample.
inline constexpr std::uint64_t kBlueStreamXor = 0xD1B54A32D192ED03ull;

// Partial Fisher-Yates over `pool`: for i in [0, k) swap pool[i] with
// pool[i + below(size - i)]. Returns the first k entries in draw order.
std::vector<std::size_t> partial_shuffle(std::vector<std::size_t> pool, std::size_t k, SplitMix64& rng);

}  // namespace bml
