#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "bml/bit_ring.hpp"

namespace bml {

// Cars that advanced during a turn (or a run of turns).
struct MoveCount {
    std::uint64_t red_moves = 0;
    std::uint64_t blue_moves = 0;

    MoveCount& operator+=(const MoveCount& o) {
        red_moves += o.red_moves;
        blue_moves += o.blue_moves;
        return *this;
    }
    friend bool operator==(const MoveCount&, const MoveCount&) = default;
};

// Cross-shaped junction: a cyclic red row and a cyclic blue column of equal
// length. Index 0 of both is the shared junction cell. Red moves towards
// higher row indices, blue towards higher column indices.
struct DirectState {
    std::size_t n = 0;
    BitRing row;
    BitRing col;

    friend bool operator==(const DirectState&, const DirectState&) = default;
};

// Throws IndexOutOfRange / JunctionDoublyOccupied.
DirectState direct_from_cars(std::size_t n, std::span<const std::size_t> red_positions,
                             std::span<const std::size_t> blue_positions);

// One turn: red substep, then blue substep. Runs move as blocks; the only
// obstacle is the junction held by the other color.
std::pair<DirectState, MoveCount> direct_step(const DirectState& s);

std::pair<DirectState, MoveCount> direct_run(DirectState s, std::uint64_t turns);

// In-place variant used by the hot loops.
MoveCount direct_step_inplace(DirectState& s);

}  // namespace bml
