#include "bml/suites.hpp"

#include <numeric>
#include <vector>

#include "bml/analysis.hpp"
#include "bml/experiments.hpp"

namespace bml::suites {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t ring_digest(std::uint64_t h, const BitRing& ring) {
    for (auto w : ring.words()) h = mix(h, w);
    return h;
}

// All subsets of {0..n-1} with at most k elements.
void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        out.push_back(cur);
        if (cur.size() == k) return;
        for (std::size_t i = from; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

const Rational kDensities[] = {Rational(1, 5), Rational(3, 10), Rational(2, 5), Rational(1, 2),
                               Rational(3, 5), Rational(7, 10), Rational(4, 5)};

}  // namespace

std::uint64_t state_digest(const NormalizedState& m) {
    return mix(ring_digest(ring_digest(mix(0, m.n), m.r), m.b), m.s);
}

std::uint64_t state_digest(const DirectState& d) {
    return ring_digest(ring_digest(mix(1, d.n), d.row), d.col);
}

DirectState random_direct_state(SplitMix64& rng, std::size_t max_n) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.below(max_n));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    const auto red = partial_shuffle(pool, static_cast<std::size_t>(rng.below(n + 1)), rng);
    bool junction = false;
    for (auto i : red) junction |= i == 0;
    if (junction) pool.erase(pool.begin());
    const auto blue = partial_shuffle(pool, static_cast<std::size_t>(rng.below(pool.size() + 1)), rng);
    return direct_from_cars(n, red, blue);
}

std::optional<Counterexample> check_equivalence(const DirectState& d0, std::uint64_t seed) {
    DirectState d = d0;
    NormalizedState m = to_normalized(d0);
    if (!(from_normalized(m) == d))
        return Counterexample{d.n, seed, 0, state_digest(d0), "embedding does not round-trip"};
    for (std::uint64_t t = 1; t <= 3 * d.n; ++t) {
        direct_step_inplace(d);
        normalized_step_inplace(m);
        if (!(from_normalized(m) == d))
            return Counterexample{d.n, seed, t, state_digest(d0), "models diverge"};
    }
    return std::nullopt;
}

SuiteResult equivalence_suite(std::size_t max_n, std::size_t max_cars, std::uint64_t samples,
                              std::size_t random_max_n, std::uint64_t seed) {
    SuiteResult res;
    std::uint64_t index = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<std::vector<std::size_t>> sets;
        subsets(n, max_cars, sets);
        for (const auto& red : sets)
            for (const auto& blue : sets) {
                ++index;
                if (!red.empty() && !blue.empty() && red.front() == 0 && blue.front() == 0) continue;
                ++res.cases;
                res.checks += 3 * n + 1;
                if (auto ce = check_equivalence(direct_from_cars(n, red, blue), index)) {
                    res.failure = ce;
                    return res;
                }
            }
    }
    for (std::uint64_t i = 0; i < samples; ++i) {
        SplitMix64 rng(seed + i);
        const DirectState d = random_direct_state(rng, random_max_n);
        ++res.cases;
        res.checks += 3 * d.n + 1;
        if (auto ce = check_equivalence(d, seed + i)) {
            res.failure = ce;
            return res;
        }
    }
    return res;
}

SuiteResult invariants_suite(std::size_t max_n, std::uint64_t samples, std::uint64_t seed) {
    SuiteResult res;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const std::uint64_t s = seed + i;
        SplitMix64 pick(s ^ 0xA5A5A5A5A5A5A5A5ull);
        const std::size_t n = 8 + static_cast<std::size_t>(pick.below(max_n > 8 ? max_n - 7 : 1));
        const Rational p = kDensities[pick.below(std::size(kDensities))];
        NormalizedState m = to_normalized(sample_junction(n, p, s));
        ++res.cases;

        const std::size_t reds = m.r.count(), blues = m.b.count();
        std::size_t v = violation_count(m);
        std::size_t red_runs = m.r.run_count(), blue_runs = m.b.run_count();
        const std::size_t widths[] = {2, 3, 5};
        std::size_t gaps[3];
        for (int w = 0; w < 3; ++w) gaps[w] = widths[w] <= n ? gap_count(m, widths[w]) : 0;
        ViolationTracker tracker(m);

        for (std::uint64_t t = 1; t <= 4 * n; ++t) {
            tracker.step(m);
            res.checks += 8;
            const std::size_t v2 = violation_count(m);
            const std::size_t rr = m.r.run_count(), br = m.b.run_count();
            std::string problem;
            if (v2 > v) problem = "violation count increased";
            else if (tracker.count() != v2) problem = "incremental violation count drifted";
            else if (m.r.count() != reds || m.b.count() != blues) problem = "car count changed";
            else if (m.r.test(m.s) && m.b.test(m.s)) problem = "junction doubly occupied";
            else if (rr > red_runs || br > blue_runs) problem = "segment count increased";
            for (int w = 0; w < 3 && problem.empty(); ++w) {
                if (widths[w] > n) continue;
                const std::size_t g = gap_count(m, widths[w]);
                if (g > gaps[w]) problem = "gap count increased for k=" + std::to_string(widths[w]);
                gaps[w] = g;
            }
            if (!problem.empty()) {
                res.failure = Counterexample{n, s, t, state_digest(m), problem};
                return res;
            }
            v = v2;
            red_runs = rr;
            blue_runs = br;
        }
    }
    return res;
}

// The (2m/(2m+1)) n + m car bound follows from the per-group count only when
// ceil((n - M)/(2m + 1)) (2m + 1) <= n; a truncated last group can break it otherwise.
bool literal_car_bound_applies(std::size_t n, const StructureReport& rep) {
    if (rep.m == 0 || rep.big_m >= n) return true;
    const std::size_t unit = 2 * rep.m + 1;
    return (n - rep.big_m + unit - 1) / unit * unit <= n;
}

SuiteResult theorems_suite(std::size_t max_n, std::uint64_t samples, std::uint64_t seed) {
    SuiteResult res;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const std::uint64_t s = seed + i;
        SplitMix64 pick(s ^ 0x5A5A5A5A5A5A5A5Aull);
        const std::size_t n = 8 + static_cast<std::size_t>(pick.below(max_n > 8 ? max_n - 7 : 1));
        const Rational p = kDensities[pick.below(std::size(kDensities))];
        const NormalizedState m0 = to_normalized(sample_junction(n, p, s));
        ++res.cases;
        const CycleReport cyc = find_cycle(m0);
        for (const auto& c : theorem_checks(cyc, p)) {
            ++res.checks;
            if (!c.passed) {
                res.failure = Counterexample{n, s, cyc.transient, state_digest(cyc.entry), c.name + ": " + c.detail};
                return res;
            }
        }
        for (const auto& [t, rep] : structure_reports_over_period(cyc))
            for (const auto& c : rep.checks) {
                if (c.name == "cars_at_least_lower_bound" && !literal_car_bound_applies(n, rep)) continue;
                ++res.checks;
                if (!c.passed) {
                    res.failure = Counterexample{n, s, cyc.transient + t, state_digest(cyc.entry),
                                                 c.name + ": " + c.detail};
                    return res;
                }
            }
    }
    return res;
}

}  // namespace bml::suites
