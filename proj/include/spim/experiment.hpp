// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spim {

inline constexpr const char* kCsvHeader =
    "scenario,sweep_name,sweep_value,trial,method,snr_db,se_bits,bound_rhs,pattern_error_rate";

struct ResultRow {
    std::string scenario;
    std::string sweep_name;
    std::optional<double> sweep_value;
    int trial = 0;
    std::string method; // SPIM, HYBRID, FD
    double snr_db = 0.0;
    double se_bits = 0.0;
    std::optional<double> bound_rhs;
    std::optional<double> pattern_error_rate;
};

/* Diagnostics of one trial, beyond the CSV rows. */
struct TrialDetail {
    std::vector<double> true_angles;
    std::vector<double> used_angles;
    bool beam_degenerate = false;
};

/* cfg is the configuration at one sweep point (ScenarioConfig::at). */
std::vector<ResultRow> run_trial(const ScenarioConfig& cfg, int trial, TrialDetail* detail = nullptr);

struct RunOptions {
    int threads = 0; // 0: hardware concurrency
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
};

/* All variants, sweep points and trials; rows in deterministic order. */
std::vector<ResultRow> run_scenario(const std::vector<ScenarioConfig>& variants, const RunOptions& opt = {});

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& is, const std::string& origin = "<stream>");

struct SummaryRow {
    std::string scenario;
    std::string sweep_name;
    std::optional<double> sweep_value;
    std::string method;
    double snr_db = 0.0;
    int count = 0;
    double mean = 0.0;
    double std = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::optional<double> bound_rhs_mean;
    std::optional<double> pattern_error_rate_mean;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows);

/* Writes DIR/<stem>.csv and DIR/<stem>_summary.csv; returns the CSV path. */
std::string write_outputs(const std::string& dir, const std::string& stem, const std::vector<ResultRow>& rows);

} // namespace spim
