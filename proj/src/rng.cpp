#include "bml/rng.hpp"

#include <stdexcept>
#include <utility>

namespace bml {

std::vector<std::size_t> partial_shuffle(std::vector<std::size_t> pool, std::size_t k, SplitMix64& rng) {
    if (k > pool.size()) throw std::invalid_argument("partial_shuffle: k exceeds pool size");
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace bml
