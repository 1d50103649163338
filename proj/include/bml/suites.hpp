#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "bml/analysis.hpp"
#include "bml/direct.hpp"
#include "bml/normalized.hpp"
#include "bml/rng.hpp"

namespace bml::suites {

struct Counterexample {
    std::size_t n = 0;
    std::uint64_t seed = 0;  // sample seed, or enumeration index for exhaustive cases
    std::uint64_t step = 0;
    std::uint64_t digest = 0;
    std::string what;
};

struct SuiteResult {
    std::uint64_t cases = 0;
    std::uint64_t checks = 0;
    std::optional<Counterexample> failure;

    bool passed() const { return !failure; }
};

std::uint64_t state_digest(const NormalizedState& m);
std::uint64_t state_digest(const DirectState& d);

// Arbitrary valid direct state with 1 <= n <= max_n and independent car counts.
DirectState random_direct_state(SplitMix64& rng, std::size_t max_n);

// Lock-step comparison of the two models for t <= 3n.
std::optional<Counterexample> check_equivalence(const DirectState& d, std::uint64_t seed);

// Every state with n <= max_n and at most max_cars cars per color, then
// `samples` random states with n <= random_max_n.
SuiteResult equivalence_suite(std::size_t max_n, std::size_t max_cars, std::uint64_t samples,
                              std::size_t random_max_n, std::uint64_t seed);

// Monotone quantities along 4n steps from random starts (n <= max_n,
// p in {0.2, ..., 0.8}).
SuiteResult invariants_suite(std::size_t max_n, std::uint64_t samples, std::uint64_t seed);

// True when the car lower bound (2m/(2m+1)) n + m is implied by the
// per-group empty-place count for this report's window.
bool literal_car_bound_applies(std::size_t n, const StructureReport& rep);

// Cycle detection plus the density-appropriate bounds and, where the
// hypothesis arises, the stable-structure checks.
SuiteResult theorems_suite(std::size_t max_n, std::uint64_t samples, std::uint64_t seed);

}  // namespace bml::suites
