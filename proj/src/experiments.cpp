#include "bml/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "bml/errors.hpp"
#include "bml/normalized.hpp"
#include "bml/rng.hpp"

namespace bml {

DirectState sample_junction(std::size_t n, const Rational& p, std::uint64_t seed) {
    if (n == 0) throw DomainError("junction length must be positive");
    if (p < 0 || p > 1) throw DomainError("density must lie in [0, 1]");
    const auto k = static_cast<std::size_t>(round_half_up(p, static_cast<std::int64_t>(n)));

    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    SplitMix64 red_stream(seed);
    const auto red = partial_shuffle(pool, k, red_stream);

    const bool junction_taken = std::find(red.begin(), red.end(), std::size_t{0}) != red.end();
    if (junction_taken) pool.erase(pool.begin());
    if (k > pool.size()) throw DensityTooHigh("no room for blue cars outside the occupied junction");
    SplitMix64 blue_stream(seed ^ kBlueStreamXor);
    const auto blue = partial_shuffle(std::move(pool), k, blue_stream);
    return direct_from_cars(n, red, blue);
}

RunRecord run_experiment(std::size_t n, const Rational& p, std::uint64_t seed, std::uint64_t budget) {
    RunRecord rec;
    rec.n = n;
    rec.p = p;
    rec.seed = seed;
    const NormalizedState m0 = to_normalized(sample_junction(n, p, seed));
    CycleOptions opts;
    opts.step_budget = budget;
    try {
        const CycleReport cyc = find_cycle(m0, opts);
        const SegmentStats seg = count_segments(cyc.entry);
        rec.complete = true;
        rec.transient = cyc.transient;
        rec.period = cyc.period;
        rec.speed = cyc.speed_red;
        rec.red_segments = seg.red_segments;
        rec.blue_segments = seg.blue_segments;
        rec.total_segments = seg.total_segments;
        rec.longest_segment = seg.longest;
        rec.m_min_block = cyc.m_min_block;
        rec.violations_on_cycle = cyc.violations_on_cycle;
    } catch (const ResourceLimit& e) {
        rec.complete = false;
        rec.steps_spent = e.steps;
    }
    return rec;
}

std::string csv_row(const RunRecord& r) {
    std::ostringstream os;
    os << r.n << ',' << to_decimal(r.p, 5) << ',' << r.seed << ',';
    if (r.complete) {
        os << r.transient << ',' << r.period << ',' << r.speed_decimal() << ',' << r.red_segments << ','
           << r.blue_segments << ',' << r.total_segments << ',' << r.longest_segment << ',' << r.m_min_block
           << ',' << r.violations_on_cycle << ",ok";
    } else {
        os << ",,,,,,,,,resource_limit";
    }
    return os.str();
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) os << csv_row(r) << '\n';
}

std::vector<RunRecord> sweep(const SweepSpec& spec) {
    struct Job {
        std::size_t n;
        Rational p;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (auto n : spec.n_values)
        for (const auto& p : spec.p_values)
            for (auto seed : spec.seeds) jobs.push_back({n, p, seed});

    std::vector<RunRecord> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            out[i] = run_experiment(jobs[i].n, jobs[i].p, jobs[i].seed, spec.budget);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, static_cast<unsigned>(jobs.size())));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    if (spec.output) {
        std::ofstream f(*spec.output, std::ios::binary);
        if (!f) throw IoError("cannot open " + spec.output->string() + " for writing");
        write_csv(f, out);
        if (!f) throw IoError("failed writing " + spec.output->string());
    }
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
    std::map<std::size_t, AggregateRow> by_n;
    for (const auto& r : records) {
        auto& row = by_n[r.n];
        row.n = r.n;
        if (!r.complete) {
            ++row.incomplete;
            continue;
        }
        ++row.runs;
        row.mean_speed += to_double(r.speed);
        row.mean_total_segments += static_cast<double>(r.total_segments);
        row.mean_segments += static_cast<double>(r.total_segments) / 2.0;
        row.mean_longest += static_cast<double>(r.longest_segment);
    }
    std::vector<AggregateRow> out;
    for (auto& [n, row] : by_n) {
        if (row.runs == 0) continue;
        const double k = static_cast<double>(row.runs);
        row.mean_speed /= k;
        row.mean_total_segments /= k;
        row.mean_segments /= k;
        row.mean_longest /= k;
        row.segs_over_n = row.mean_segments / static_cast<double>(n);
        row.segs_over_sqrt_n = row.mean_segments / std::sqrt(static_cast<double>(n));
        out.push_back(row);
    }
    if (out.empty()) throw EmptyInput("no complete records to aggregate");
    return out;
}

void print_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%8s %8s %10s %10s %10s %10s %12s %6s\n", "N", "Speed", "No.segs",
                  "Red+Blue", "Longest", "segs/N", "segs/sqrt(N)", "runs");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%8zu %8.5f %10.1f %10.1f %10.1f %10.4f %12.4f %6zu\n", r.n,
                      r.mean_speed, r.mean_segments, r.mean_total_segments, r.mean_longest, r.segs_over_n,
                      r.segs_over_sqrt_n, r.runs);
        os << buf;
    }
}

}  // namespace bml
