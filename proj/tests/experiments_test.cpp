#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bml/errors.hpp"
#include "bml/experiments.hpp"

using bml::Rational;
using V = std::vector<std::size_t>;

namespace {

// Independent transcription of the published sampling procedure.
struct RefStream {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }
};

V ref_draw(V pool, std::size_t k, std::uint64_t seed) {
    RefStream g{seed};
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + g.below(pool.size() - i)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::pair<V, V> ref_sample(std::size_t n, std::size_t k, std::uint64_t seed) {
    V all(n);
    std::iota(all.begin(), all.end(), 0);
    const V red = ref_draw(all, k, seed);
    V pool = all;
    if (std::find(red.begin(), red.end(), 0) != red.end()) pool.erase(pool.begin());
    return {red, ref_draw(pool, k, seed ^ 0xD1B54A32D192ED03ull)};
}

std::string csv_of(const std::vector<bml::RunRecord>& recs) {
    std::ostringstream os;
    bml::write_csv(os, recs);
    return os.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("sampling follows the published procedure") {
    CHECK(bml::sample_junction(8, Rational(0), 3) == bml::direct_from_cars(8, V{}, V{}));

    const bml::DirectState d = bml::sample_junction(8, Rational(1, 4), 1);
    const auto [red, blue] = ref_sample(8, 2, 1);
    CHECK(d.row.indices() == red);
    CHECK(d.col.indices() == blue);
    // Frozen from the reference transcription.
    CHECK(d.row.indices() == V{0, 1});
    CHECK(d.col.indices() == V{4, 5});

    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const std::size_t n = 3 + seed % 60;
        const Rational p(static_cast<std::int64_t>(seed % 11), 10);
        const std::size_t k = static_cast<std::size_t>(bml::round_half_up(p, static_cast<std::int64_t>(n)));
        V all(n);
        std::iota(all.begin(), all.end(), 0);
        const V red_ref = ref_draw(all, k, seed);
        const bool took_junction = std::find(red_ref.begin(), red_ref.end(), 0) != red_ref.end();
        if (k > n - (took_junction ? 1 : 0)) {
            CHECK_THROWS_AS(bml::sample_junction(n, p, seed), bml::DensityTooHigh);
            continue;
        }
        const bml::DirectState s = bml::sample_junction(n, p, seed);
        const auto [r, b] = ref_sample(n, k, seed);
        REQUIRE(s.row.indices() == r);
        REQUIRE(s.col.indices() == b);
        REQUIRE(s.row.count() == k);
        REQUIRE(s.col.count() == k);
        REQUIRE_FALSE((s.row.test(0) && s.col.test(0)));
    }
}

TEST_CASE("full density cannot place blue off the junction") {
    CHECK_THROWS_AS(bml::sample_junction(5, Rational(1), 1), bml::DensityTooHigh);
}

TEST_CASE("single runs") {
    const auto low = bml::run_experiment(256, Rational(1, 4), 9);
    CHECK(low.complete);
    CHECK(low.speed == Rational(1));
    CHECK(low.speed_decimal() == "1.00000");
    CHECK(low.m_min_block == 0);

    const auto high = bml::run_experiment(1000, Rational(13, 25), 2);
    REQUIRE(high.complete);
    CHECK(high.speed <= Rational(25, 26));
    CHECK(high.speed >= Rational(25, 26) - Rational(13, 1000));
    CHECK(high.total_segments == high.red_segments + high.blue_segments);

    const auto crit = bml::run_experiment(1000, Rational(1, 2), 4);
    REQUIRE(crit.complete);
    CHECK(std::max(crit.red_segments, crit.blue_segments) <= 31);

    const auto cut = bml::run_experiment(500, Rational(1, 2), 1, 5);
    CHECK_FALSE(cut.complete);
    CHECK(bml::csv_row(cut) == "500,0.50000,1,,,,,,,,,,resource_limit");
}

TEST_CASE("csv layout") {
    bml::RunRecord r;
    r.n = 64;
    r.p = Rational(12, 25);
    r.seed = 7;
    r.complete = true;
    r.transient = 10;
    r.period = 64;
    r.speed = Rational(2, 3);
    r.red_segments = 3;
    r.blue_segments = 4;
    r.total_segments = 7;
    r.longest_segment = 5;
    r.m_min_block = 2;
    r.violations_on_cycle = 2;
    CHECK(bml::csv_row(r) == "64,0.48000,7,10,64,0.66667,3,4,7,5,2,2,ok");
    CHECK(csv_of({}) == std::string(bml::kCsvHeader) + "\n");
    CHECK(csv_of({r}) == std::string(bml::kCsvHeader) + "\n" + bml::csv_row(r) + "\n");
}

TEST_CASE("sweeps are ordered and reproducible") {
    bml::SweepSpec spec;
    spec.n_values = {48, 32};
    spec.p_values = {Rational(12, 25)};
    spec.seeds = {3, 1, 2};
    const auto one = bml::sweep(spec);
    REQUIRE(one.size() == 6);
    CHECK(one[0].n == 48);
    CHECK(one[0].seed == 3);
    CHECK(one[5].n == 32);
    CHECK(one[5].seed == 2);

    spec.workers = 3;
    const auto three = bml::sweep(spec);
    CHECK(csv_of(one) == csv_of(three));

    spec.seeds.clear();
    CHECK(bml::sweep(spec).empty());
}

TEST_CASE("sweep writes the csv file") {
    const auto path = std::filesystem::temp_directory_path() / "bml_sweep_test.csv";
    bml::SweepSpec spec;
    spec.n_values = {40};
    spec.p_values = {Rational(1, 2)};
    spec.output = path;
    bml::sweep(spec);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == std::string(bml::kCsvHeader) + "\n");
    std::filesystem::remove(path);

    spec.output = "/nonexistent-dir/out.csv";
    spec.seeds = {1};
    CHECK_THROWS_AS(bml::sweep(spec), bml::IoError);
}

TEST_CASE("aggregation") {
    CHECK_THROWS_AS(bml::aggregate({}), bml::EmptyInput);

    const auto rec = bml::run_experiment(200, Rational(1, 2), 1);
    const auto rows = bml::aggregate({rec});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == 200);
    CHECK(rows[0].runs == 1);
    CHECK(rows[0].mean_speed == doctest::Approx(bml::to_double(rec.speed)));
    CHECK(rows[0].mean_total_segments == doctest::Approx(static_cast<double>(rec.total_segments)));
    CHECK(rows[0].mean_segments == doctest::Approx(rec.total_segments / 2.0));
    CHECK(rows[0].mean_longest == doctest::Approx(static_cast<double>(rec.longest_segment)));
    CHECK(rows[0].segs_over_n == doctest::Approx(rec.total_segments / 2.0 / 200));
    CHECK(rows[0].segs_over_sqrt_n == doctest::Approx(rec.total_segments / 2.0 / std::sqrt(200.0)));

    bml::RunRecord cut;
    cut.n = 200;
    const auto mixed = bml::aggregate({cut, rec});
    CHECK(mixed[0].runs == 1);
    CHECK(mixed[0].incomplete == 1);
    CHECK_THROWS_AS(bml::aggregate({cut}), bml::EmptyInput);

    const auto other = bml::run_experiment(100, Rational(1, 2), 2);
    const auto ab = bml::aggregate({rec, other});
    const auto ba = bml::aggregate({other, rec});
    REQUIRE(ab.size() == 2);
    CHECK(ab[0].n == 100);
    CHECK(ab[0].mean_speed == ba[0].mean_speed);
    CHECK(ab[1].mean_longest == ba[1].mean_longest);

    std::ostringstream os;
    bml::print_aggregate(os, ab);
    CHECK(os.str().find("segs/sqrt(N)") != std::string::npos);
}

}
