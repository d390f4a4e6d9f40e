// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/channel_model.hpp"
#include "spim/ris_control.hpp"
#include "spim/spatial_patterns.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spim {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Acquisition { bypass, omp, cosamp };
enum class LinkMode { single_user, multi_user };

struct ScenarioConfig {
    std::string name = "custom";
    LinkMode link = LinkMode::single_user;
    int n = 128;
    int nbar = 16;
    int m_y = 8;
    int m_z = 8;
    int L = 8;
    int L_S = 1;
    int N_S = 1;
    int U = 1;
    std::vector<double> snr_db{0.0};
    double snr_h_db = std::numeric_limits<double>::infinity(); // +inf: perfect channel
    double pilot_snr_db = std::numeric_limits<double>::infinity();
    int delta_bits = 3; // 0: continuous
    QuantizeRule quantize = QuantizeRule::floor;
    int trials = 500;
    std::uint64_t seed = 1;
    Acquisition acquisition = Acquisition::bypass;
    std::string sweep = "none";
    std::vector<double> sweep_values;
    RisAngleModel ris_angles = RisAngleModel::paired;
    double alpha1 = std::numeric_limits<double>::quiet_NaN(); // L = 2 power split, NaN: off
    double kappa_db = 0.0;
    int outer_iterations = 3;
    double outer_tol = 1e-4;
    PatternOrder pattern_order = PatternOrder::lexicographic;
    int ris_sweeps = 20;
    int cosamp_iterations = 10;
    int detection_symbols = 4;
    int randomizations = 100;
    bool bs_angles_on_grid = false;
    std::string path_dump; // optional CSV of per-trial path parameters

    int m() const { return m_y * m_z; }
    int sweep_points() const { return sweep == "none" ? 1 : static_cast<int>(sweep_values.size()); }
    /* Configuration at one sweep point; the sweep variable is overwritten. */
    ScenarioConfig at(int sweep_index) const;
    void validate() const;
};

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");
ScenarioConfig load_scenario_file(const std::string& path);

/* Built-in scenarios; each name expands to one or more variants. */
const std::map<std::string, std::vector<ScenarioConfig>>& builtin_scenarios();

/* Built-in name or path to a scenario file. */
std::vector<ScenarioConfig> resolve_scenario(const std::string& name_or_path);

} // namespace spim
