#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bml/direct.hpp"
#include "bml/rational.hpp"

namespace bml {

enum class Cell : std::uint8_t { Empty, Red, Blue };

// n x n torus, row-major. Rows grow downward, columns rightward.
// Red moves right (column + 1), blue moves up (row - 1).
struct TorusGrid {
    std::size_t n = 0;
    std::vector<Cell> cells;

    TorusGrid() = default;
    explicit TorusGrid(std::size_t size) : n(size), cells(size * size, Cell::Empty) {}

    Cell at(std::size_t row, std::size_t col) const { return cells[row * n + col]; }
    Cell& at(std::size_t row, std::size_t col) { return cells[row * n + col]; }

    std::size_t count(Cell c) const;

    friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};

// round(p n^2 / 2) cars of each color on distinct cells, so p is the total
// occupied fraction as in the usual BML convention. One splitmix64 stream
// partially shuffles all n^2 cells; the first draws are red, the next blue.
// Throws DensityTooHigh if the two colors cannot fit.
TorusGrid torus_random(std::size_t n, const Rational& p, std::uint64_t seed);

std::pair<TorusGrid, MoveCount> torus_step(const TorusGrid& g);
MoveCount torus_step_inplace(TorusGrid& g);

enum class Outcome : std::uint8_t { FreeFlow, Jammed, Undetermined };
const char* to_string(Outcome o);

struct RunOutcome {
    Outcome kind = Outcome::Undetermined;
    std::uint64_t turns_elapsed = 0;
    Rational final_speed_estimate{0};  // moves per car per turn over the last (up to n) turns
};

// Steps `g` in place until free flow is certified (n consecutive full-speed
// turns returning to the window's starting grid), a zero-move turn occurs,
// or max_turns run out. `on_turn(turn, grid)` is called after every turn.
template <typename OnTurn>
RunOutcome classify_run(TorusGrid& g, std::uint64_t max_turns, OnTurn&& on_turn);
RunOutcome classify_run(TorusGrid& g, std::uint64_t max_turns);

// Binary PPM (P6), one pixel per cell, grid row 0 at the top. Throws IoError.
void write_frame(const TorusGrid& g, const std::filesystem::path& path);
std::string ppm_bytes(const TorusGrid& g);

// Zero-padded turn index with a .ppm suffix, e.g. 00000520.ppm.
std::string frame_filename(std::uint64_t turn);

namespace detail {
struct FlowMonitor {
    explicit FlowMonitor(const TorusGrid& g);
    // Returns true once the outcome is decided.
    bool observe(const TorusGrid& before, const TorusGrid& after, const MoveCount& mc, std::uint64_t turn);
    RunOutcome result(std::uint64_t turns) const;

    std::size_t n;
    std::uint64_t cars;
    std::uint64_t streak = 0;
    TorusGrid window_start;
    std::vector<std::uint64_t> recent;  // ring of per-turn move totals
    std::uint64_t recorded = 0;
    Outcome decided = Outcome::Undetermined;
};
}  // namespace detail

template <typename OnTurn>
RunOutcome classify_run(TorusGrid& g, std::uint64_t max_turns, OnTurn&& on_turn) {
    detail::FlowMonitor mon(g);
    if (mon.cars == 0) return RunOutcome{Outcome::FreeFlow, 0, Rational(1)};
    TorusGrid before;
    for (std::uint64_t t = 1; t <= max_turns; ++t) {
        before = g;
        const MoveCount mc = torus_step_inplace(g);
        on_turn(t, static_cast<const TorusGrid&>(g));
        if (mon.observe(before, g, mc, t)) return mon.result(t);
    }
    return mon.result(max_turns);
}

}  // namespace bml
