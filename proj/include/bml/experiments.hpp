#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bml/analysis.hpp"
#include "bml/direct.hpp"
#include "bml/rational.hpp"

namespace bml {

// round(p n) red cars and round(p n) blue cars, placed by partial shuffles of
// two splitmix64 streams (seed and seed ^ kBlueStreamXor). Blue avoids the
// junction when red drew it. Throws DensityTooHigh if blue cannot fit.
DirectState sample_junction(std::size_t n, const Rational& p, std::uint64_t seed);

struct RunRecord {
    std::size_t n = 0;
    Rational p;
    std::uint64_t seed = 0;
    bool complete = false;
    std::uint64_t transient = 0;
    std::uint64_t period = 0;
    Rational speed{1};
    std::size_t red_segments = 0;
    std::size_t blue_segments = 0;
    std::size_t total_segments = 0;
    std::size_t longest_segment = 0;
    std::size_t m_min_block = 0;
    std::size_t violations_on_cycle = 0;
    std::uint64_t steps_spent = 0;  // only meaningful for incomplete records

    std::string speed_decimal() const { return to_decimal(speed, 5); }
};

// Budget 0 selects the default. A ResourceLimit is caught and yields an incomplete record.
RunRecord run_experiment(std::size_t n, const Rational& p, std::uint64_t seed, std::uint64_t budget = 0);

struct SweepSpec {
    std::vector<std::size_t> n_values;
    std::vector<Rational> p_values;
    std::vector<std::uint64_t> seeds;
    std::uint64_t budget = 0;
    std::optional<std::filesystem::path> output;
    unsigned workers = 1;
};

inline constexpr const char* kCsvHeader =
    "n,p,seed,transient,period,speed,red_segments,blue_segments,total_segments,longest_segment,"
    "m_min_block,violations_on_cycle,status";

std::string csv_row(const RunRecord& r);
void write_csv(std::ostream& os, const std::vector<RunRecord>& records);

// One record per (n, p, seed), n-major then p then seed, independent of worker count.
// Throws IoError if the CSV cannot be written.
std::vector<RunRecord> sweep(const SweepSpec& spec);

struct AggregateRow {
    std::size_t n = 0;
    std::size_t runs = 0;
    std::size_t incomplete = 0;
    double mean_speed = 0;
    double mean_total_segments = 0;  // red + blue
    double mean_segments = 0;        // per color, (red + blue) / 2
    double mean_longest = 0;
    double segs_over_n = 0;          // per-color segments / N
    double segs_over_sqrt_n = 0;
};

// Means per n, in ascending n. Incomplete records are counted but excluded.
// Throws EmptyInput when nothing complete remains.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

void print_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace bml
