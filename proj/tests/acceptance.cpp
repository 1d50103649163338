// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "bml/analysis.hpp"
#include "bml/experiments.hpp"
#include "bml/suites.hpp"
#include "bml/torus.hpp"

using bml::Rational;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string describe(const bml::suites::SuiteResult& r) {
    std::string s = fmt("cases=%llu checks=%llu", static_cast<unsigned long long>(r.cases),
                        static_cast<unsigned long long>(r.checks));
    if (r.failure)
        s += fmt(" counterexample n=%zu seed=%llu step=%llu digest=0x%016llx (%s)", r.failure->n,
                 static_cast<unsigned long long>(r.failure->seed), static_cast<unsigned long long>(r.failure->step),
                 static_cast<unsigned long long>(r.failure->digest), r.failure->what.c_str());
    return s;
}

double per_color_segments(const bml::RunRecord& r) { return r.total_segments / 2.0; }

Verdict equivalence() {
    const auto r = bml::suites::equivalence_suite(7, 3, 10000, 64, 1);
    return {r.passed(), describe(r)};
}

Verdict monotonicity() {
    const auto r = bml::suites::invariants_suite(256, 1000, 1);
    return {r.passed(), describe(r)};
}

Verdict speed_bounds() {
    const Rational densities[] = {Rational(1, 5), Rational(3, 10), Rational(2, 5), Rational(1, 2),
                                  Rational(3, 5), Rational(7, 10), Rational(4, 5)};
    bml::SplitMix64 pick(0xACCE55);
    int bad = 0;
    std::string first;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const std::size_t n = 8 + pick.below(249);
        const Rational p = densities[pick.below(std::size(densities))];
        const bml::NormalizedState m0 = bml::to_normalized(bml::sample_junction(n, p, i + 1));
        const auto cyc = bml::find_cycle(m0);
        const auto k = static_cast<std::int64_t>(m0.r.count());
        const Rational realized(k, static_cast<std::int64_t>(n));
        const Rational lower(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n + cyc.violations_on_cycle));
        const bool ok = cyc.speed_red == cyc.speed_blue && cyc.speed_red <= bml::speed_bound(realized) &&
                        cyc.speed_red >= lower;
        if (!ok && bad++ == 0) first = fmt(" first failure n=%zu seed=%llu", n, static_cast<unsigned long long>(i + 1));
    }
    return {bad == 0, fmt("200 configurations, %d violating", bad) + first};
}

Verdict low_density_exact() {
    int runs = 0, slow = 0;
    for (std::size_t n : {64u, 256u, 1024u})
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto rec = bml::run_experiment(n, Rational(1, 4), seed);
            ++runs;
            if (!rec.complete || rec.speed != Rational(1)) ++slow;
        }
    return {slow == 0, fmt("%d runs, %d below speed 1", runs, slow)};
}

Verdict table_p048() {
    const std::size_t n = 1000;
    const Rational p(12, 25);
    const Rational floor_speed = Rational(1) - Rational(bml::c_of_p(p), static_cast<std::int64_t>(n));
    double speed = 0, segs = 0, combined = 0;
    int below = 0, incomplete = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto rec = bml::run_experiment(n, p, seed);
        if (!rec.complete) {
            ++incomplete;
            continue;
        }
        speed += bml::to_double(rec.speed);
        segs += per_color_segments(rec);
        combined += static_cast<double>(rec.total_segments);
        if (rec.speed < floor_speed) ++below;
    }
    speed /= 30;
    const double ratio = segs / 30 / n;
    const bool ok = incomplete == 0 && below == 0 && speed >= 0.999 && std::abs(ratio - 0.037) <= 0.008;
    return {ok, fmt("mean speed %.5f, segments per color/N %.4f (red+blue/N %.4f), %d below 1-C/N, %d incomplete",
                    speed, ratio, combined / 30 / n, below, incomplete)};
}

Verdict table_p052() {
    const std::size_t n = 10000;
    const Rational p(13, 25);
    const Rational lo(9604, 10000), hi(96154, 100000);
    int bad_speed = 0, bad_segs = 0, bad_m = 0, incomplete = 0;
    double segs = 0;
    std::size_t max_total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rec = bml::run_experiment(n, p, seed);
        if (!rec.complete) {
            ++incomplete;
            continue;
        }
        if (rec.speed < lo || rec.speed > hi) ++bad_speed;
        if (rec.total_segments > 26) ++bad_segs;
        if (rec.m_min_block < 400 || rec.m_min_block > 412) ++bad_m;
        segs += per_color_segments(rec);
        max_total = std::max(max_total, rec.total_segments);
    }
    const double mean = segs / 10;
    const bool ok = incomplete == 0 && bad_speed == 0 && bad_segs == 0 && bad_m == 0 && mean >= 3 && mean <= 15;
    return {ok, fmt("speed out of range %d, red+blue segments max %zu (over 26: %d), mean per color %.1f, m out of "
                    "[400,412] %d, %d incomplete",
                    bad_speed, max_total, bad_segs, mean, bad_m, incomplete)};
}

Verdict table_p050() {
    const std::size_t n = 10000;
    const Rational p(1, 2);
    int slow = 0, many = 0, incomplete = 0;
    double segs = 0, combined = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto rec = bml::run_experiment(n, p, seed);
        if (!rec.complete) {
            ++incomplete;
            continue;
        }
        if (rec.speed < Rational(99, 100)) ++slow;
        if (std::max(rec.red_segments, rec.blue_segments) > 100) ++many;
        segs += per_color_segments(rec);
        combined += static_cast<double>(rec.total_segments);
    }
    const double ratio = segs / 30 / std::sqrt(static_cast<double>(n));
    const bool ok = incomplete == 0 && slow == 0 && many == 0 && std::abs(ratio - 0.43) <= 0.08;
    return {ok, fmt("%d below 0.99, %d with over 100 segments per color, segments per color/sqrt(N) %.4f "
                    "(red+blue %.4f), %d incomplete",
                    slow, many, ratio, combined / 30 / std::sqrt(static_cast<double>(n)), incomplete)};
}

Verdict stable_structure() {
    const Rational ps[] = {Rational(13, 25), Rational(3, 5)};
    const std::size_t ns[] = {512, 2048};
    std::uint64_t moments = 0;
    int failing_runs = 0, silent_runs = 0;
    std::string first;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const Rational p = ps[i % 2];
        const std::size_t n = ns[(i / 2) % 2];
        const auto cyc = bml::find_cycle(bml::to_normalized(bml::sample_junction(n, p, i + 1)));
        const auto reports = bml::structure_reports_over_period(cyc);
        if (reports.empty()) ++silent_runs;
        bool bad = false;
        for (const auto& [t, rep] : reports) {
            ++moments;
            for (const auto& c : rep.checks)
                if (!c.passed && !bad) {
                    bad = true;
                    if (failing_runs == 0)
                        first = fmt(" first failure n=%zu seed=%llu t=%llu %s (%s)", n,
                                    static_cast<unsigned long long>(i + 1), static_cast<unsigned long long>(t),
                                    c.name.c_str(), c.detail.c_str());
                }
        }
        failing_runs += bad;
    }
    return {failing_runs == 0 && silent_runs == 0,
            fmt("50 runs, %llu hypothesis moments, %d runs failing, %d runs without a moment",
                static_cast<unsigned long long>(moments), failing_runs, silent_runs) +
                first};
}

Verdict torus_phases() {
    int free_low = 0, jam_high = 0, unstable = 0;
    for (const Rational p : {Rational(1, 5), Rational(1, 2)}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            bml::TorusGrid g = bml::torus_random(64, p, seed);
            const std::uint64_t cars = g.count(bml::Cell::Red) + g.count(bml::Cell::Blue);
            const auto out = bml::classify_run(g, 100000);
            if (out.kind == bml::Outcome::Undetermined) continue;
            if (p == Rational(1, 5) && out.kind == bml::Outcome::FreeFlow) ++free_low;
            if (p == Rational(1, 2) && out.kind == bml::Outcome::Jammed) ++jam_high;
            for (std::size_t t = 0; t < 3 * g.n; ++t) {
                const auto mc = bml::torus_step_inplace(g);
                const std::uint64_t moved = mc.red_moves + mc.blue_moves;
                if ((out.kind == bml::Outcome::FreeFlow && moved != cars) ||
                    (out.kind == bml::Outcome::Jammed && moved != 0)) {
                    ++unstable;
                    break;
                }
            }
        }
    }
    return {free_low >= 18 && jam_high >= 18 && unstable == 0,
            fmt("p=0.2 free flow %d/20, p=0.5 jammed %d/20, %d unstable classifications", free_low, jam_high,
                unstable)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict formats() {
    const auto dir = std::filesystem::temp_directory_path() / "bml_acceptance";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    bml::TorusGrid g(3);
    g.at(0, 0) = bml::Cell::Red;
    g.at(1, 2) = bml::Cell::Blue;
    g.at(2, 1) = bml::Cell::Red;
    std::string expected = "P6\n3 3\n255\n";
    const unsigned char W[3] = {255, 255, 255}, R[3] = {255, 0, 0}, B[3] = {0, 0, 255};
    const unsigned char* pixels[9] = {R, W, W, W, W, B, W, R, W};
    for (auto px : pixels) expected.append(reinterpret_cast<const char*>(px), 3);
    bml::write_frame(g, dir / bml::frame_filename(0));
    const bool ppm_ok = slurp(dir / "00000000.ppm") == expected;

    bml::SweepSpec spec;
    spec.n_values = {64, 128};
    spec.p_values = {Rational(12, 25), Rational(3, 5)};
    spec.seeds = {1, 2, 3, 4, 5};
    std::vector<std::string> outputs;
    for (unsigned workers : {1u, 1u, 4u}) {
        spec.workers = workers;
        spec.output = dir / ("sweep_" + std::to_string(outputs.size()) + ".csv");
        bml::sweep(spec);
        outputs.push_back(slurp(*spec.output));
    }
    const bool csv_ok = outputs[0] == outputs[1] && outputs[0] == outputs[2] &&
                        outputs[0].rfind(std::string(bml::kCsvHeader) + "\n", 0) == 0;
    std::filesystem::remove_all(dir);
    return {ppm_ok && csv_ok, std::string("ppm ") + (ppm_ok ? "bit-exact" : "MISMATCH") + ", csv " +
                                  (csv_ok ? "byte-identical over repeats and 1/4 workers" : "MISMATCH")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"model equivalence", equivalence},
        {"monotonicity", monotonicity},
        {"speed bounds", speed_bounds},
        {"p=0.25 exact speed", low_density_exact},
        {"table p=0.48", table_p048},
        {"table p=0.52", table_p052},
        {"table p=0.50", table_p050},
        {"stable structure", stable_structure},
        {"torus phases", torus_phases},
        {"format fidelity", formats},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %-20s %s  %s [%.1fs]\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
