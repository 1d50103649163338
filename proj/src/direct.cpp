#include "bml/direct.hpp"

#include <string>

#include "bml/errors.hpp"

namespace bml {

namespace {

// Advance one color's ring. `blocked` tells whether the other color sits in the junction.
std::uint64_t substep(BitRing& ring, bool blocked) {
    const std::size_t n = ring.size();
    const std::size_t cars = ring.count();
    if (cars == 0) return 0;
    if (!blocked || !ring.test(n - 1)) {
        ring.rotate_up();
        return cars;
    }
    // The run whose head waits in front of the junction stays put.
    const std::size_t held = ring.run_ending_at(n - 1);
    for (std::size_t k = 0; k < held; ++k) ring.reset(n - 1 - k);
    ring.rotate_up();
    for (std::size_t k = 0; k < held; ++k) ring.set(n - 1 - k);
    return cars - held;
}

}  // namespace

DirectState direct_from_cars(std::size_t n, std::span<const std::size_t> red_positions,
                             std::span<const std::size_t> blue_positions) {
    if (n == 0) throw DomainError("junction length must be positive");
    DirectState s{n, BitRing(n), BitRing(n)};
    for (auto i : red_positions) {
        if (i >= n) throw IndexOutOfRange("red position " + std::to_string(i) + " out of range");
        s.row.set(i);
    }
    for (auto i : blue_positions) {
        if (i >= n) throw IndexOutOfRange("blue position " + std::to_string(i) + " out of range");
        s.col.set(i);
    }
    if (s.row.test(0) && s.col.test(0)) throw JunctionDoublyOccupied("junction holds both a red and a blue car");
    return s;
}

MoveCount direct_step_inplace(DirectState& s) {
    MoveCount mc;
    mc.red_moves = substep(s.row, s.col.test(0));
    mc.blue_moves = substep(s.col, s.row.test(0));
    return mc;
}

std::pair<DirectState, MoveCount> direct_step(const DirectState& s) {
    DirectState next = s;
    const MoveCount mc = direct_step_inplace(next);
    return {std::move(next), mc};
}

std::pair<DirectState, MoveCount> direct_run(DirectState s, std::uint64_t turns) {
    MoveCount total;
    for (std::uint64_t t = 0; t < turns; ++t) total += direct_step_inplace(s);
    return {std::move(s), total};
}

}  // namespace bml
