// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spim {

namespace {

const std::vector<std::string> kSweeps = {"none", "snr", "snr_h", "pilot_snr", "L", "L_S", "N_S",
                                          "U", "M", "alpha1", "delta_bits"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& origin, int line) {
    const std::string t = trim(v);
    if (t == "inf" || t == "+inf" || t == "perfect") return std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) fail(origin, line, "expected a number, got '" + t + "'");
    return x;
}

int to_int(const std::string& v, const std::string& origin, int line) {
    const std::string t = trim(v);
    int x = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), x);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) fail(origin, line, "expected an integer, got '" + t + "'");
    return x;
}

bool to_bool(const std::string& v, const std::string& origin, int line) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    fail(origin, line, "expected true/false, got '" + t + "'");
}

/* "a, b, c" or "start:step:stop" (inclusive). */
std::vector<double> to_list(const std::string& v, const std::string& origin, int line) {
    std::vector<double> out;
    const std::string t = trim(v);
    if (t.find(':') != std::string::npos) {
        std::vector<double> p;
        std::stringstream ss(t);
        std::string part;
        while (std::getline(ss, part, ':')) p.push_back(to_double(part, origin, line));
        if (p.size() != 3 || !(p[1] > 0) || p[2] < p[0]) fail(origin, line, "range must be start:step:stop with step > 0");
        const int n = static_cast<int>(std::floor((p[2] - p[0]) / p[1] + 1e-9));
        for (int k = 0; k <= n; ++k) out.push_back(p[0] + k * p[1]);
        return out;
    }
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(to_double(part, origin, line));
    if (out.empty()) fail(origin, line, "empty list");
    return out;
}

void set_key(ScenarioConfig& c, const std::string& key, const std::string& val, const std::string& origin, int line) {
    auto I = [&] { return to_int(val, origin, line); };
    auto D = [&] { return to_double(val, origin, line); };
    const std::string v = trim(val);
    if (key == "name") c.name = v;
    else if (key == "link") {
        if (v == "single") c.link = LinkMode::single_user;
        else if (v == "multi") c.link = LinkMode::multi_user;
        else fail(origin, line, "link must be single or multi");
    } else if (key == "N") c.n = I();
    else if (key == "N_bar") c.nbar = I();
    else if (key == "M_y") c.m_y = I();
    else if (key == "M_z") c.m_z = I();
    else if (key == "M") {
        const int m = I();
        const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
        if (s * s != m) fail(origin, line, "M must be a perfect square; use M_y and M_z otherwise");
        c.m_y = c.m_z = s;
    } else if (key == "L") c.L = I();
    else if (key == "L_S") c.L_S = I();
    else if (key == "N_S") c.N_S = I();
    else if (key == "U") c.U = I();
    else if (key == "snr_db") c.snr_db = to_list(val, origin, line);
    else if (key == "snr_h_db") c.snr_h_db = D();
    else if (key == "pilot_snr_db") c.pilot_snr_db = D();
    else if (key == "delta_bits") c.delta_bits = v == "continuous" ? 0 : I();
    else if (key == "quantize") {
        if (v == "floor") c.quantize = QuantizeRule::floor;
        else if (v == "round") c.quantize = QuantizeRule::round;
        else fail(origin, line, "quantize must be floor or round");
    } else if (key == "trials") c.trials = I();
    else if (key == "seed") {
        std::uint64_t s = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size()) fail(origin, line, "seed must be a non-negative integer");
        c.seed = s;
    } else if (key == "acquisition") {
        if (v == "bypass") c.acquisition = Acquisition::bypass;
        else if (v == "omp") c.acquisition = Acquisition::omp;
        else if (v == "cosamp") c.acquisition = Acquisition::cosamp;
        else fail(origin, line, "acquisition must be omp, cosamp or bypass");
    } else if (key == "sweep") {
        if (std::find(kSweeps.begin(), kSweeps.end(), v) == kSweeps.end()) fail(origin, line, "unknown sweep '" + v + "'");
        c.sweep = v;
    } else if (key == "sweep_values") c.sweep_values = to_list(val, origin, line);
    else if (key == "ris_angles") {
        if (v == "paired") c.ris_angles = RisAngleModel::paired;
        else if (v == "independent") c.ris_angles = RisAngleModel::independent;
        else fail(origin, line, "ris_angles must be paired or independent");
    } else if (key == "alpha1") c.alpha1 = v == "off" ? std::numeric_limits<double>::quiet_NaN() : D();
    else if (key == "kappa_db") c.kappa_db = D();
    else if (key == "outer_iterations") c.outer_iterations = I();
    else if (key == "outer_tol") c.outer_tol = D();
    else if (key == "pattern_order") {
        if (v == "lexicographic") c.pattern_order = PatternOrder::lexicographic;
        else if (v == "top_gain") c.pattern_order = PatternOrder::top_gain;
        else fail(origin, line, "pattern_order must be lexicographic or top_gain");
    } else if (key == "ris_sweeps") c.ris_sweeps = I();
    else if (key == "cosamp_iterations") c.cosamp_iterations = I();
    else if (key == "detection_symbols") c.detection_symbols = I();
    else if (key == "randomizations") c.randomizations = I();
    else if (key == "bs_angles_on_grid") c.bs_angles_on_grid = to_bool(val, origin, line);
    else if (key == "path_dump") c.path_dump = v;
    else fail(origin, line, "unknown key '" + key + "'");
}

} // namespace

ScenarioConfig ScenarioConfig::at(int k) const {
    ScenarioConfig c = *this;
    if (sweep == "none") return c;
    require(k >= 0 && k < static_cast<int>(sweep_values.size()), "ScenarioConfig::at: sweep index out of range");
    const double v = sweep_values[k];
    const int iv = static_cast<int>(std::lround(v));
    if (sweep == "snr") c.snr_db = {v};
    else if (sweep == "snr_h") c.snr_h_db = v;
    else if (sweep == "pilot_snr") c.pilot_snr_db = v;
    else if (sweep == "L") c.L = iv;
    else if (sweep == "L_S") c.L_S = iv;
    else if (sweep == "N_S") c.N_S = iv;
    else if (sweep == "U") c.U = iv;
    else if (sweep == "delta_bits") c.delta_bits = iv;
    else if (sweep == "alpha1") c.alpha1 = v;
    else if (sweep == "M") {
        const int s = static_cast<int>(std::lround(std::sqrt(v)));
        if (s * s != iv) throw ConfigError("sweep M: values must be perfect squares");
        c.m_y = c.m_z = s;
    }
    return c;
}

void ScenarioConfig::validate() const {
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("scenario '" + name + "': " + msg);
    };
    check(n >= 1 && nbar >= 1 && m_y >= 1 && m_z >= 1, "array sizes must be >= 1");
    check(L >= 1, "L must be >= 1");
    check(L_S >= 1 && L_S <= L, "need 1 <= L_S <= L");
    check(U >= 1, "U must be >= 1");
    check(trials >= 1, "trials must be >= 1");
    check(!snr_db.empty(), "snr_db grid is empty");
    for (double s : snr_db) check(std::isfinite(s), "snr_db values must be finite");
    check(!std::isnan(snr_h_db), "snr_h_db must be a number or 'perfect'");
    check(delta_bits >= 0 && delta_bits <= 16, "delta_bits must be in 0..16");
    check(outer_iterations >= 1 && ris_sweeps >= 1 && cosamp_iterations >= 1, "iteration counts must be >= 1");
    check(detection_symbols >= 0 && randomizations >= 0, "counts must be >= 0");
    check(std::find(kSweeps.begin(), kSweeps.end(), sweep) != kSweeps.end(), "unknown sweep '" + sweep + "'");
    check(sweep == "none" || !sweep_values.empty(), "sweep_values required for sweep '" + sweep + "'");
    if (!std::isnan(alpha1)) check(L == 2 && alpha1 >= 0.0 && alpha1 <= 1.0, "alpha1 needs L = 2 and 0 <= alpha1 <= 1");
    if (link == LinkMode::single_user) {
        check(U == 1, "single-user link needs U = 1");
        check(N_S >= 1 && N_S <= L_S, "need 1 <= N_S <= L_S");
        check(N_S <= std::min(n, nbar), "N_S exceeds array size");
    } else {
        check(L_S == 1, "multi-user link uses L_S = 1");
        check(U <= n, "U exceeds BS antennas");
    }
    if (acquisition != Acquisition::bypass) check(L <= 2 * n, "L exceeds dictionary size");
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
    ScenarioConfig c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) fail(origin, line, "missing key");
        set_key(c, key, s.substr(eq + 1), origin, line);
    }
    return c;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    ScenarioConfig c = parse_scenario(ss.str(), path);
    if (c.name == "custom") c.name = std::filesystem::path(path).stem().string();
    return c;
}

namespace {

std::vector<double> range(double a, double step, double b) {
    std::vector<double> v;
    for (double x = a; x <= b + 1e-9; x += step) v.push_back(x);
    return v;
}

ScenarioConfig base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    return c;
}

std::map<std::string, std::vector<ScenarioConfig>> make_builtins() {
    std::map<std::string, std::vector<ScenarioConfig>> reg;

    for (int ls : {1, 2}) {
        ScenarioConfig c = base("fig3-LS" + std::to_string(ls));
        c.L = 8;
        c.L_S = ls;
        c.snr_db = range(-20, 5, 10);
        reg["fig3"].push_back(c);
    }
    for (auto [acq, tag] : {std::pair{Acquisition::omp, "omp"}, std::pair{Acquisition::cosamp, "cosamp"}}) {
        ScenarioConfig c = base(std::string("fig4-") + tag);
        c.acquisition = acq;
        c.sweep = "snr_h";
        c.sweep_values = range(-10, 5, 30);
        reg["fig4"].push_back(c);
    }
    {
        ScenarioConfig c = base("fig5");
        c.snr_db = {-10, 0};
        c.sweep = "L";
        c.sweep_values = range(1, 1, 10);
        reg["fig5"].push_back(c);
    }
    for (int ns : {1, 2}) {
        ScenarioConfig c = base("fig6-NS" + std::to_string(ns));
        c.N_S = ns;
        c.L_S = ns;
        c.sweep = "L_S";
        c.sweep_values = range(ns, 1, 8);
        reg["fig6"].push_back(c);
    }
    {
        ScenarioConfig c = base("fig7");
        c.L = 2;
        c.alpha1 = 0.5;
        c.sweep = "alpha1";
        c.sweep_values = range(0.1, 0.1, 0.9);
        reg["fig7"].push_back(c);
    }
    for (int l : {2, 4, 8}) {
        ScenarioConfig c = base("fig8-L" + std::to_string(l));
        c.L = l;
        c.sweep = "M";
        c.sweep_values = {16, 36, 64, 100, 144, 196, 256};
        reg["fig8"].push_back(c);
    }
    for (int ls : {1, 2, 3}) {
        ScenarioConfig c = base("fig9-LS" + std::to_string(ls));
        c.L_S = ls;
        c.L = ls;
        c.sweep = "L";
        c.sweep_values = range(ls, 1, 10);
        reg["fig9"].push_back(c);
    }
    for (int u : {1, 3, 8}) {
        ScenarioConfig c = base("fig10-U" + std::to_string(u));
        c.link = LinkMode::multi_user;
        c.U = u;
        c.sweep = "L";
        c.sweep_values = range(1, 1, 10);
        reg["fig10"].push_back(c);
    }
    for (int l : {1, 4, 8}) {
        ScenarioConfig c = base("fig11-L" + std::to_string(l));
        c.link = LinkMode::multi_user;
        c.L = l;
        c.sweep = "U";
        c.sweep_values = range(1, 1, 8);
        reg["fig11"].push_back(c);
    }
    return reg;
}

} // namespace

const std::map<std::string, std::vector<ScenarioConfig>>& builtin_scenarios() {
    static const auto reg = make_builtins();
    return reg;
}

std::vector<ScenarioConfig> resolve_scenario(const std::string& name_or_path) {
    const auto& reg = builtin_scenarios();
    if (auto it = reg.find(name_or_path); it != reg.end()) return it->second;
    if (std::filesystem::exists(name_or_path)) return {load_scenario_file(name_or_path)};
    throw ConfigError("unknown scenario '" + name_or_path + "' (not a built-in name or a readable file)");
}

} // namespace spim
