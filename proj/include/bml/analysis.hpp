#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bml/normalized.hpp"
#include "bml/rational.hpp"

namespace bml {

struct CycleOptions {
    // Maximum number of normalized steps spent locating the cycle. 0 selects
    // the default of 50 * n * (1 + total cars).
    std::uint64_t step_budget = 0;
    // Cross-check the push-accounting speed against move counting in the
    // direct model when period * n stays below this many cell updates.
    std::uint64_t direct_check_limit = 4'000'000'000ull;
};

std::uint64_t default_step_budget(std::size_t n, std::size_t total_cars);

struct CycleReport {
    std::uint64_t transient = 0;
    std::uint64_t period = 0;
    Rational speed_red{1};
    Rational speed_blue{1};
    std::size_t m_min_block = 0;    // min(s_R, s_B) when the junction reaches a violation block
    std::size_t violations_on_cycle = 0;
    std::uint64_t red_pushes = 0;   // push events of each color over one period
    std::uint64_t blue_pushes = 0;
    bool direct_checked = false;    // move counting in the direct model was run and agreed
    NormalizedState entry;          // first state on the periodic orbit

    bool free_flowing() const { return violations_on_cycle == 0; }
};

// Exact transient and period of the orbit of normalized_step, with speeds
// over one period. Throws ResourceLimit when the budget runs out.
CycleReport find_cycle(const NormalizedState& m0, const CycleOptions& opts = {});

struct SegmentStats {
    std::size_t red_segments = 0;
    std::size_t blue_segments = 0;
    std::size_t total_segments = 0;
    std::size_t longest = 0;

    friend bool operator==(const SegmentStats&, const SegmentStats&) = default;
};

SegmentStats count_segments(const NormalizedState& m);

// min(1, 1/(2p)). Requires 0 < p < 1.
Rational speed_bound(const Rational& p);

// floor(p / (1 - 2p)). Throws DomainError unless 0 < p < 1/2.
std::int64_t c_of_p(const Rational& p);

struct IntInterval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool contains(std::int64_t v) const { return lo <= v && v <= hi; }
    friend bool operator==(const IntInterval&, const IntInterval&) = default;
};

// Integers m with c <= n + m and (2m/(2m+1)) n + m <= c, where c is the
// total car count 2 * round(p n). Throws EmptyInterval if none exist.
IntInterval m_bounds(std::int64_t n, const Rational& p);
IntInterval m_bounds_for_cars(std::int64_t n, std::int64_t total_cars);

// Same upper bound with the empty places counted per started group:
// n + m - ceil((n - m)/(2m + 1)) <= c. Never narrower than m_bounds_for_cars.
IntInterval m_bounds_grouped(std::int64_t n, std::int64_t total_cars);

struct NamedCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct StructureReport {
    std::size_t s_r = 0;
    std::size_t s_b = 0;
    std::size_t m = 0;
    std::size_t big_m = 0;
    std::vector<NamedCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Junction pattern of the stable-structure hypothesis: B[S] = 0 and
// R[S-1] = B[S-1] = 1, with s_R and s_B the red and blue runs ending at S-1.
// It only describes a stable configuration at the moment the junction reaches
// the violation block, i.e. when the previous step pushed nothing.
bool structure_hypothesis_holds(const NormalizedState& m);

// Checks the stable-configuration structure around the junction. The state
// must lie on the periodic orbit; throws HypothesisNotMet if the junction
// pattern is absent.
StructureReport stable_structure_report(const NormalizedState& m);

// Walks one period from `entry` and reports every moment at which the junction
// reaches a violation block meeting the hypothesis.
std::vector<std::pair<std::uint64_t, StructureReport>> structure_reports_over_period(const CycleReport& cycle);

// Runs find_cycle and evaluates the density-appropriate bundle of bounds.
std::vector<NamedCheck> verify_theorem_suite(const NormalizedState& m0, const Rational& p,
                                             const CycleOptions& opts = {});
std::vector<NamedCheck> theorem_checks(const CycleReport& cycle, const Rational& p);

}  // namespace bml
