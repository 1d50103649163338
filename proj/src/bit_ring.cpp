#include "bml/bit_ring.hpp"

namespace bml {

std::size_t BitRing::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BitRing::none() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::size_t BitRing::find_prev_zero(std::size_t from) const {
    if (n_ == 0) return 0;
    const std::size_t nw = words_.size();
    std::size_t w = from >> 6;
    // Bits at or below `from` in the starting word.
    std::uint64_t below = (from & 63) == 63 ? ~std::uint64_t{0}
                                            : (std::uint64_t{1} << ((from & 63) + 1)) - 1;
    std::uint64_t zeros = ~words_[w] & below & (w + 1 == nw ? tail_mask() : ~std::uint64_t{0});
    if (zeros) return (w << 6) + 63 - std::countl_zero(zeros);
    for (std::size_t k = 1; k <= nw; ++k) {
        w = w == 0 ? nw - 1 : w - 1;
        std::uint64_t mask = w + 1 == nw ? tail_mask() : ~std::uint64_t{0};
        zeros = ~words_[w] & mask;
        if (zeros) return (w << 6) + 63 - std::countl_zero(zeros);
    }
    return n_;
}

std::size_t BitRing::run_ending_at(std::size_t end) const {
    if (!test(end)) return 0;
    const std::size_t z = find_prev_zero(end);
    if (z == n_) return n_;
    return end >= z ? end - z : end + n_ - z;
}

std::size_t BitRing::run_count() const {
    if (n_ == 0) return 0;
    BitRing shifted = *this;
    shifted.rotate_up();
    std::size_t starts = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
        starts += static_cast<std::size_t>(std::popcount(words_[w] & ~shifted.words_[w]));
    if (starts == 0 && !none()) return 1;
    return starts;
}

std::size_t BitRing::longest_run() const {
    if (n_ == 0 || none()) return 0;
    if (all()) return n_;
    // Start scanning just after a zero so no run is split by the wrap.
    const std::size_t z = find_prev_zero(n_ - 1);
    std::size_t best = 0, cur = 0;
    for (std::size_t k = 1; k <= n_; ++k) {
        const std::size_t i = (z + k) % n_;
        if (test(i)) {
            ++cur;
            if (cur > best) best = cur;
        } else {
            cur = 0;
        }
    }
    return best;
}

void BitRing::rotate_up() {
    if (n_ == 0) return;
    const std::uint64_t wrapped = test(n_ - 1) ? 1 : 0;
    std::uint64_t carry = 0;
    for (auto& w : words_) {
        const std::uint64_t out = w >> 63;
        w = (w << 1) | carry;
        carry = out;
    }
    words_.back() &= tail_mask();
    words_[0] |= wrapped;
}

std::vector<std::size_t> BitRing::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t x = words_[w];
        while (x) {
            out.push_back((w << 6) + static_cast<std::size_t>(std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

}  // namespace bml
