#include "bml/torus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "bml/errors.hpp"
#include "bml/rng.hpp"

namespace bml {

namespace {

// Moves one color along every line. `cell(line, k)` addresses position k of a
// line, with position k + 1 directly ahead of k.
template <typename Index>
std::uint64_t substep(std::vector<Cell>& cells, std::size_t n, Cell color, Index cell) {
    std::uint64_t moved_total = 0;
    std::vector<Cell> line(n);
    std::vector<char> moves(n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = 0; k < n; ++k) line[k] = cells[cell(l, k)];
        std::size_t anchor = n;
        for (std::size_t k = 0; k < n; ++k)
            if (line[k] != color) {
                anchor = k;
                break;
            }
        if (anchor == n) {  // the whole line is one run; rotating it changes nothing
            moved_total += n;
            continue;
        }
        // Walk leftwards from the anchor: a car moves iff the cell ahead is
        // empty or holds a car of its color that moves.
        std::fill(moves.begin(), moves.end(), 0);
        std::size_t moved = 0;
        for (std::size_t step = 1; step < n; ++step) {
            const std::size_t k = (anchor + n - step) % n;
            const std::size_t ahead = k + 1 == n ? 0 : k + 1;
            if (line[k] != color) continue;
            moves[k] = line[ahead] == Cell::Empty || (line[ahead] == color && moves[ahead]);
            moved += moves[k] ? 1 : 0;
        }
        if (moved == 0) continue;
        for (std::size_t k = 0; k < n; ++k)
            if (moves[k]) cells[cell(l, k)] = Cell::Empty;
        for (std::size_t k = 0; k < n; ++k)
            if (moves[k]) cells[cell(l, k + 1 == n ? 0 : k + 1)] = color;
        moved_total += moved;
    }
    return moved_total;
}

}  // namespace

std::size_t TorusGrid::count(Cell c) const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), c));
}

TorusGrid torus_random(std::size_t n, const Rational& p, std::uint64_t seed) {
    if (n == 0) throw DomainError("torus size must be positive");
    if (p < 0 || p > 1) throw DomainError("density must lie in [0, 1]");
    const auto area = n * n;
    // p is the occupied fraction of the torus, split evenly between colors.
    const auto k = static_cast<std::size_t>(round_half_up(p / 2, static_cast<std::int64_t>(area)));
    if (2 * k > area) throw DensityTooHigh("cannot fit " + std::to_string(k) + " cars of each color on " +
                                           std::to_string(area) + " cells");
    std::vector<std::size_t> pool(area);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    SplitMix64 rng(seed);
    const auto picks = partial_shuffle(std::move(pool), 2 * k, rng);
    TorusGrid g(n);
    for (std::size_t i = 0; i < picks.size(); ++i) g.cells[picks[i]] = i < k ? Cell::Red : Cell::Blue;
    return g;
}

MoveCount torus_step_inplace(TorusGrid& g) {
    const std::size_t n = g.n;
    MoveCount mc;
    mc.red_moves = substep(g.cells, n, Cell::Red, [n](std::size_t row, std::size_t k) { return row * n + k; });
    mc.blue_moves = substep(g.cells, n, Cell::Blue,
                            [n](std::size_t col, std::size_t k) { return ((n - k) % n) * n + col; });
    return mc;
}

std::pair<TorusGrid, MoveCount> torus_step(const TorusGrid& g) {
    TorusGrid next = g;
    const MoveCount mc = torus_step_inplace(next);
    return {std::move(next), mc};
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::FreeFlow: return "FreeFlow";
        case Outcome::Jammed: return "Jammed";
        case Outcome::Undetermined: return "Undetermined";
    }
    return "?";
}

namespace detail {

FlowMonitor::FlowMonitor(const TorusGrid& g)
    : n(g.n), cars(g.count(Cell::Red) + g.count(Cell::Blue)), recent(std::max<std::size_t>(g.n, 1), 0) {}

bool FlowMonitor::observe(const TorusGrid& before, const TorusGrid& after, const MoveCount& mc,
                          std::uint64_t turn) {
    (void)turn;
    const std::uint64_t moves = mc.red_moves + mc.blue_moves;
    recent[recorded % recent.size()] = moves;
    ++recorded;
    if (moves == 0) {
        decided = Outcome::Jammed;
        return true;
    }
    if (moves != cars) {
        streak = 0;
        return false;
    }
    if (streak == 0) window_start = before;
    if (++streak == n) {
        if (after == window_start) {
            decided = Outcome::FreeFlow;
            return true;
        }
        streak = 0;
    }
    return false;
}

RunOutcome FlowMonitor::result(std::uint64_t turns) const {
    const std::uint64_t window = std::min<std::uint64_t>(recorded, recent.size());
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < window; ++i) total += recent[i];
    RunOutcome out;
    out.kind = decided;
    out.turns_elapsed = turns;
    out.final_speed_estimate =
        window == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(total), static_cast<std::int64_t>(cars * window));
    return out;
}

}  // namespace detail

RunOutcome classify_run(TorusGrid& g, std::uint64_t max_turns) {
    return classify_run(g, max_turns, [](std::uint64_t, const TorusGrid&) {});
}

std::string ppm_bytes(const TorusGrid& g) {
    std::string out = "P6\n" + std::to_string(g.n) + " " + std::to_string(g.n) + "\n255\n";
    out.reserve(out.size() + 3 * g.cells.size());
    for (Cell c : g.cells) {
        switch (c) {
            case Cell::Empty: out.append("\xFF\xFF\xFF", 3); break;
            case Cell::Red: out.append("\xFF\x00\x00", 3); break;
            case Cell::Blue: out.append("\x00\x00\xFF", 3); break;
        }
    }
    return out;
}

void write_frame(const TorusGrid& g, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    const std::string bytes = ppm_bytes(g);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("failed writing " + path.string());
}

std::string frame_filename(std::uint64_t turn) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08llu.ppm", static_cast<unsigned long long>(turn));
    return buf;
}

}  // namespace bml
