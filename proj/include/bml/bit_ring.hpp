#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bml {

// Fixed-length cyclic sequence of bits packed into 64-bit words.
// Bits past size() in the last word are always zero.
class BitRing {
public:
    BitRing() = default;
    explicit BitRing(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

    std::size_t count() const;
    bool none() const;
    bool all() const { return count() == n_; }

    std::size_t next(std::size_t i) const { return i + 1 == n_ ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? n_ - 1 : i - 1; }

    // First index j reached by walking left (decreasing, cyclic) from `from`
    // inclusive whose bit is zero. Returns size() if every bit is set.
    std::size_t find_prev_zero(std::size_t from) const;

    // Length of the run of set bits ending at `end` and extending leftwards.
    // A full ring reports size().
    std::size_t run_ending_at(std::size_t end) const;

    // Number of maximal cyclic runs of set bits; a full ring is one run.
    std::size_t run_count() const;
    std::size_t longest_run() const;

    // Every bit moves from i to i+1 (mod size()).
    void rotate_up();

    std::vector<std::size_t> indices() const;

    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const BitRing&, const BitRing&) = default;

private:
    std::uint64_t tail_mask() const {
        const std::size_t r = n_ & 63;
        return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace bml
