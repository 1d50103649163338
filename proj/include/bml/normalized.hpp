#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bml/bit_ring.hpp"
#include "bml/direct.hpp"

namespace bml {

// Time-normalized junction: cars stay put while the junction pointer `s`
// walks left one place per turn. Cars only move when pushed.
struct NormalizedState {
    std::size_t n = 0;
    BitRing r;
    BitRing b;
    std::size_t s = 0;

    friend bool operator==(const NormalizedState&, const NormalizedState&) = default;
};

// Builds a state from car positions. `s` defaults to n-1.
// Throws IndexOutOfRange / JunctionDoublyOccupied.
NormalizedState normalized_from_cars(std::size_t n, std::span<const std::size_t> red,
                                     std::span<const std::size_t> blue);
NormalizedState normalized_from_cars(std::size_t n, std::span<const std::size_t> red,
                                     std::span<const std::size_t> blue, std::size_t s);

enum class PushKind : std::uint8_t { None, RedPushed, BluePushed };

struct PushEvent {
    PushKind kind = PushKind::None;
    std::size_t vacated_index = 0;
    std::size_t filled_index = 0;

    // Number of cars that lost one move: the pushed run's length.
    std::size_t run_length(std::size_t n) const {
        if (kind == PushKind::None) return 0;
        return vacated_index >= filled_index ? vacated_index - filled_index
                                             : vacated_index + n - filled_index;
    }
    friend bool operator==(const PushEvent&, const PushEvent&) = default;
};

NormalizedState to_normalized(const DirectState& d);
DirectState from_normalized(const NormalizedState& m);

std::pair<NormalizedState, PushEvent> normalized_step(const NormalizedState& m);
PushEvent normalized_step_inplace(NormalizedState& m);

struct ViolationSet {
    std::vector<std::size_t> v_b;  // R[i-1] = B[i-1] = 1, B[i] = 0
    std::vector<std::size_t> v_r;  // R[i-1] = B[i] = 1
    std::vector<bool> x;

    std::size_t size() const { return v_b.size() + v_r.size(); }
};

ViolationSet violations(const NormalizedState& m);
std::size_t violation_count(const NormalizedState& m);

inline bool is_violation(const NormalizedState& m, std::size_t i) {
    const std::size_t p = m.r.prev(i);
    return m.r.test(p) && (m.b.test(i) || m.b.test(p));
}

// Free-flow test: every place holds at most one car, and no blue car has
// a red car immediately to its left. Asserts agreement with violations().
bool is_free_flowing(const NormalizedState& m);

// Number of cyclic windows of width k in which both rows are empty.
std::size_t gap_count(const NormalizedState& m, std::size_t k);

// Keeps |V| current across steps by re-examining only the places next to
// the cells a push touched.
class ViolationTracker {
public:
    explicit ViolationTracker(const NormalizedState& m) : count_(violation_count(m)) {}

    // Advances `m` one turn and updates the count.
    PushEvent step(NormalizedState& m);

    std::size_t count() const { return count_; }

    // Full recount; true when it matches the tracked value.
    bool verify(const NormalizedState& m) const { return violation_count(m) == count_; }

private:
    std::size_t count_;
};

}  // namespace bml
