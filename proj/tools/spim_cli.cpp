// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/experiment.hpp"
#include "spim/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

std::string stem_of(const std::string& scenario) {
    if (spim::builtin_scenarios().count(scenario)) return scenario;
    return std::filesystem::path(scenario).stem().string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPIM RIS-aided mMIMO link-level simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario sweep and write CSV + summary");
    std::string scenario, out_dir = "results";
    int trials = 0, threads = 0;
    std::uint64_t seed = 0;
    run->add_option("--scenario", scenario, "built-in name or scenario file")->required();
    auto* trials_opt = run->add_option("--trials", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--threads", threads, "worker threads (0: all cores)");

    auto* list = app.add_subcommand("list-scenarios", "list built-in scenarios");

    auto* summ = app.add_subcommand("summarize", "aggregate a result CSV");
    std::string in_csv;
    summ->add_option("--in", in_csv, "result CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*list) {
            for (const auto& [name, variants] : spim::builtin_scenarios()) {
                std::cout << name << ':';
                for (const auto& v : variants) std::cout << ' ' << v.name;
                std::cout << '\n';
            }
            return kOk;
        }
        if (*summ) {
            std::ifstream is(in_csv);
            if (!is) {
                std::cerr << "error: cannot open " << in_csv << '\n';
                return kIo;
            }
            spim::write_summary(std::cout, spim::summarize(spim::read_csv(is, in_csv)));
            return kOk;
        }
        spim::RunOptions opt;
        opt.threads = threads;
        if (*trials_opt) opt.trials = trials;
        if (*seed_opt) opt.seed = seed;
        const auto variants = spim::resolve_scenario(scenario);
        const auto rows = spim::run_scenario(variants, opt);
        const std::string path = spim::write_outputs(out_dir, stem_of(scenario), rows);
        std::cout << "wrote " << rows.size() << " rows to " << path << '\n';
        return kOk;
    } catch (const spim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const spim::ContractError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const spim::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
}
