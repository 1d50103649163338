// bml: single-junction traffic simulator, sweeps, torus runs and verification suites.
//
//   bml junction-run   --n 1000 --p 0.52 --seed 1
//   bml junction-sweep --n-list 1000,5000 --p 0.48 --seeds 1..30 --out sweep.csv
//   bml torus-run      --n 64 --p 0.2 --seed 3 --frames-dir frames --frame-every 100
//   bml verify         --suite equivalence --max-n 7
//
// Exit status: 0 success, 1 failed verification or resource limit, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bml/analysis.hpp"
#include "bml/errors.hpp"
#include "bml/experiments.hpp"
#include "bml/suites.hpp"
#include "bml/torus.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 2;
constexpr int kFailed = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bml::Rational density_arg(const std::string& text) {
    bml::Rational p;
    try {
        p = bml::parse_rational(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--p: ") + e.what());
    }
    if (p < 0 || p > 1) throw UsageError("--p must lie in [0, 1], got " + text);
    return p;
}

std::vector<std::size_t> size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("--n-list: bad entry '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("--n-list must not be empty");
    return out;
}

// "1,2,3" or "1..30" (inclusive) or "" (none).
std::vector<std::uint64_t> seed_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    if (text.empty()) return out;
    try {
        if (auto dots = text.find(".."); dots != std::string::npos) {
            const auto lo = std::stoull(text.substr(0, dots));
            const auto hi = std::stoull(text.substr(dots + 2));
            if (hi < lo) throw std::invalid_argument(text);
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
            return out;
        }
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoull(item));
    } catch (const std::exception&) {
        throw UsageError("--seeds: expected a list like 1,2,3 or a range like 1..30");
    }
    return out;
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("BML_OUT_DIR"); env && *env) return env;
    return ".";
}

void print_counterexample(const bml::suites::Counterexample& ce) {
    std::cout << "counterexample: n=" << ce.n << " seed=" << ce.seed << " step=" << ce.step << " digest=0x"
              << std::hex << ce.digest << std::dec << " (" << ce.what << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-junction BML traffic simulator and verification laboratory"};
    app.require_subcommand(1);

    // junction-run
    auto* run = app.add_subcommand("junction-run", "Sample one junction, find its stable cycle, print a CSV row");
    std::size_t run_n = 0;
    std::string run_p;
    std::uint64_t run_seed = 1, run_budget = 0;
    run->add_option("--n", run_n, "Segment length N")->required()->check(CLI::PositiveNumber);
    run->add_option("--p", run_p, "Density, decimal or fraction (13/25)")->required();
    run->add_option("--seed", run_seed, "RNG seed");
    run->add_option("--budget", run_budget, "Step budget for cycle detection (0 = 50 n (1 + cars))");

    // junction-sweep
    auto* sw = app.add_subcommand("junction-sweep", "Run a grid of junction experiments, write CSV and a summary table");
    std::string sw_n, sw_p, sw_seeds = "1..30", sw_out;
    std::uint64_t sw_budget = 0;
    unsigned sw_workers = 1;
    sw->add_option("--n-list", sw_n, "Comma-separated segment lengths")->required();
    sw->add_option("--p", sw_p, "Density")->required();
    sw->add_option("--seeds", sw_seeds, "Seeds: 1,2,3 or 1..30");
    sw->add_option("--out", sw_out, "CSV path (default $BML_OUT_DIR/sweep.csv)");
    sw->add_option("--budget", sw_budget, "Step budget per run");
    sw->add_option("--workers", sw_workers, "Worker threads")->check(CLI::PositiveNumber);

    // torus-run
    auto* tr = app.add_subcommand("torus-run", "Run the 2D variant model on an N x N torus");
    std::size_t tr_n = 64;
    std::string tr_p;
    std::uint64_t tr_seed = 1, tr_max = 100000, tr_every = 0;
    std::string tr_frames;
    tr->add_option("--n", tr_n, "Torus side")->check(CLI::PositiveNumber);
    tr->add_option("--p", tr_p, "Total occupied fraction")->required();
    tr->add_option("--seed", tr_seed, "RNG seed");
    tr->add_option("--max-turns", tr_max, "Turn budget");
    tr->add_option("--frames-dir", tr_frames, "Directory for PPM frames");
    tr->add_option("--frame-every", tr_every, "Write a frame every K turns (0 = first and last only)");

    // verify
    auto* vf = app.add_subcommand("verify", "Run a verification suite");
    std::string vf_suite;
    std::size_t vf_max_n = 0;
    std::uint64_t vf_samples = 0, vf_seed = 1;
    vf->add_option("--suite", vf_suite, "equivalence | invariants | theorems")
        ->required()
        ->check(CLI::IsMember({"equivalence", "invariants", "theorems"}));
    vf->add_option("--max-n", vf_max_n, "Largest N")->check(CLI::PositiveNumber);
    vf->add_option("--samples", vf_samples, "Random samples");
    vf->add_option("--seed", vf_seed, "Base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*run) {
            const auto p = density_arg(run_p);
            const auto rec = bml::run_experiment(run_n, p, run_seed, run_budget);
            std::cout << bml::kCsvHeader << '\n' << bml::csv_row(rec) << '\n';
            return rec.complete ? 0 : kFailed;
        }

        if (*sw) {
            bml::SweepSpec spec;
            spec.n_values = size_list(sw_n);
            spec.p_values = {density_arg(sw_p)};
            spec.seeds = seed_list(sw_seeds);
            spec.budget = sw_budget;
            spec.workers = sw_workers;
            spec.output = sw_out.empty() ? default_out_dir() / "sweep.csv" : fs::path(sw_out);
            const auto records = bml::sweep(spec);
            std::cout << "wrote " << records.size() << " records to " << spec.output->string() << '\n';
            bool any_incomplete = false;
            for (const auto& r : records) any_incomplete |= !r.complete;
            if (!records.empty()) {
                try {
                    bml::print_aggregate(std::cout, bml::aggregate(records));
                } catch (const bml::EmptyInput&) {
                    std::cout << "no complete runs\n";
                }
            }
            return any_incomplete ? kFailed : 0;
        }

        if (*tr) {
            const auto p = density_arg(tr_p);
            if (tr_max < tr_n) throw UsageError("--max-turns must be at least --n");
            auto grid = bml::torus_random(tr_n, p, tr_seed);
            fs::path frames;
            if (!tr_frames.empty()) {
                frames = tr_frames;
                fs::create_directories(frames);
                bml::write_frame(grid, frames / bml::frame_filename(0));
            }
            auto outcome = bml::classify_run(grid, tr_max, [&](std::uint64_t t, const bml::TorusGrid& g) {
                if (!frames.empty() && tr_every > 0 && t % tr_every == 0)
                    bml::write_frame(g, frames / bml::frame_filename(t));
            });
            if (!frames.empty()) bml::write_frame(grid, frames / bml::frame_filename(outcome.turns_elapsed));
            std::cout << "outcome=" << bml::to_string(outcome.kind) << " turns=" << outcome.turns_elapsed
                      << " speed=" << bml::to_decimal(outcome.final_speed_estimate, 5) << " red="
                      << grid.count(bml::Cell::Red) << " blue=" << grid.count(bml::Cell::Blue) << '\n';
            return 0;
        }

        if (*vf) {
            bml::suites::SuiteResult res;
            if (vf_suite == "equivalence") {
                res = bml::suites::equivalence_suite(vf_max_n ? vf_max_n : 7, 3, vf_samples, 64, vf_seed);
            } else if (vf_suite == "invariants") {
                res = bml::suites::invariants_suite(vf_max_n ? vf_max_n : 256, vf_samples ? vf_samples : 100,
                                                    vf_seed);
            } else {
                res = bml::suites::theorems_suite(vf_max_n ? vf_max_n : 256, vf_samples ? vf_samples : 50, vf_seed);
            }
            std::cout << "suite=" << vf_suite << " cases=" << res.cases << " checks=" << res.checks << " result="
                      << (res.passed() ? "PASS" : "FAIL") << '\n';
            if (res.failure) print_counterexample(*res.failure);
            return res.passed() ? 0 : kFailed;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const bml::DensityTooHigh& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const bml::DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const bml::ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << " after " << e.steps << " steps\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return 0;
}
