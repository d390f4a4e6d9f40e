// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/experiment.hpp"

#include "spim/array_geometry.hpp"
#include "spim/beamformers.hpp"
#include "spim/channel_acquisition.hpp"
#include "spim/channel_model.hpp"
#include "spim/ris_control.hpp"
#include "spim/se_metrics.hpp"
#include "spim/spim_receiver.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

namespace spim {

namespace {

enum Stream : std::uint64_t { kChannel = 1, kPerturb, kPlan, kPilotNoise, kDetect, kRisSearch };

Rng stream(const ScenarioConfig& cfg, int trial, Stream s) { return Rng(derive_seed(cfg.seed, trial, s)); }

double sigma2_of(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double sin_deg(double a) { return std::sin(deg2rad(a)); }

ChannelOptions channel_options(const ScenarioConfig& cfg) {
    ChannelOptions opt;
    opt.ris_angles = cfg.ris_angles;
    if (!std::isnan(cfg.alpha1)) opt.br_power = {cfg.alpha1, 1.0 - cfg.alpha1};
    return opt;
}

double snap_to_grid(double angle, const DirectionGrid& grid) {
    double best = grid.angles.front();
    for (double g : grid.angles)
        if (std::abs(sin_deg(g) - sin_deg(angle)) < std::abs(sin_deg(best) - sin_deg(angle))) best = g;
    return best;
}

/* Index of the true path nearest in sin-domain to each estimated angle. */
std::vector<int> associate(const std::vector<double>& est, const std::vector<double>& truth) {
    std::vector<int> idx;
    for (double e : est) {
        int best = 0;
        for (std::size_t l = 1; l < truth.size(); ++l)
            if (std::abs(sin_deg(truth[l]) - sin_deg(e)) < std::abs(sin_deg(truth[best]) - sin_deg(e)))
                best = static_cast<int>(l);
        idx.push_back(best);
    }
    return idx;
}

/* Estimated BS angles of one link, sorted ascending. */
std::vector<double> acquire_angles(const ScenarioConfig& cfg, const ChannelRealization& design, const PathSet& truth,
                                   int trial, int user) {
    std::vector<double> ang;
    if (cfg.acquisition == Acquisition::bypass) {
        ang = truth.bs_angles;
    } else {
        Rng plan_rng(derive_seed(cfg.seed, trial, kPlan + 16 * user));
        Rng noise_rng(derive_seed(cfg.seed, trial, kPilotNoise + 16 * user));
        const PilotPlan plan = default_pilot_plan(cfg.L, cfg.m(), cfg.nbar, 1, 1, cfg.delta_bits, plan_rng);
        const double nv = std::isinf(cfg.pilot_snr_db) ? 0.0 : sigma2_of(cfg.pilot_snr_db);
        const CMat r = simulate_pilots(design, plan, nv, noise_rng);
        const UlaSpec bs(cfg.n);
        const DirectionGrid grid = DirectionGrid::uniform_sine(2 * cfg.n);
        const CMat d = build_bs_dictionary(bs, grid);
        const RecoveryResult res = cfg.acquisition == Acquisition::omp ? omp(r, d, grid, cfg.L)
                                                                       : cosamp(r, d, grid, cfg.L, cfg.cosamp_iterations);
        ang = res.angles;
    }
    std::sort(ang.begin(), ang.end());
    return ang;
}

std::vector<double> lookup_angles(const std::vector<double>& used, const PathSet& truth) {
    std::vector<double> ue;
    for (int l : associate(used, truth.bs_angles)) ue.push_back(truth.ue_angles[l]);
    return ue;
}

ChannelRealization make_channel(const ScenarioConfig& cfg, const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue,
                                Rng& rng) {
    ChannelRealization ch = generate_channel(bs, ris, ue, cfg.L, rng, channel_options(cfg));
    if (cfg.bs_angles_on_grid) {
        const DirectionGrid grid = DirectionGrid::uniform_sine(2 * cfg.n);
        PathSet p = ch.paths;
        for (double& a : p.bs_angles) a = snap_to_grid(a, grid);
        ch = channel_from_paths(bs, ris, ue, p);
    }
    return ch;
}

ResultRow base_row(const ScenarioConfig& cfg, int trial, const char* method, double snr) {
    ResultRow r;
    r.scenario = cfg.name;
    r.sweep_name = cfg.sweep;
    r.trial = trial;
    r.method = method;
    r.snr_db = snr;
    return r;
}

double pattern_error_rate_su(const CMat& h, const std::vector<CMat>& f, const PatternLookup& lk,
                             const PatternBook& book, double sigma2, int symbols, Rng& rng) {
    if (symbols <= 0) return std::nan("");
    long errors = 0, total = 0;
    for (int i = 0; i < book.S; ++i) {
        const CMat hf = h * f[i];
        for (int k = 0; k < symbols; ++k) {
            CVec s(hf.cols());
            for (Eigen::Index q = 0; q < s.size(); ++q) s[q] = crandn(rng);
            CVec y = hf * s / std::sqrt(static_cast<double>(hf.cols()));
            for (Eigen::Index q = 0; q < y.size(); ++q) y[q] += crandn(rng, sigma2);
            errors += !detect_pattern(y, lk, book, i).correct;
            ++total;
        }
    }
    return static_cast<double>(errors) / total;
}

std::vector<ResultRow> run_single_user(const ScenarioConfig& cfg, int trial, TrialDetail* detail) {
    const UlaSpec bs(cfg.n), ue(cfg.nbar);
    const UpaSpec ris(cfg.m_z, cfg.m_y);
    Rng ch_rng = stream(cfg, trial, kChannel);
    const ChannelRealization truth = make_channel(cfg, bs, ris, ue, ch_rng);
    Rng pert_rng = stream(cfg, trial, kPerturb);
    const ChannelRealization design = perturb_channel(truth, cfg.snr_h_db, pert_rng);

    /* Step 1: BS-side directions. */
    const std::vector<double> angles = acquire_angles(cfg, design, truth.paths, trial, 0);
    const CMat a_c = transmit_steering_bank(angles, bs);

    /* Step 4 before 2-3: with one user the RIS objective does not depend on the
     * beamformers, so the outer alternation reaches its fixed point at once. */
    const QuadraticForm q = build_q(design);
    RisConfig cont = RisConfig::identity(cfg.m());
    RisConfig psi;
    double prev_obj = -1.0;
    for (int it = 0; it < cfg.outer_iterations; ++it) {
        const SuRisResult r = optimize_ris_su(q, cfg.delta_bits, cont, cfg.ris_sweeps, cfg.quantize, 1e-12);
        cont = r.continuous;
        psi = r.config;
        const double obj = ris_objective(q, psi.psi);
        if (prev_obj > 0 && std::abs(obj - prev_obj) <= cfg.outer_tol * prev_obj) break;
        prev_obj = obj;
    }

    const CMat h_d = cascade(design, psi);
    const CMat h_t = cascade(truth, psi);
    const FdBeamformer fd = fd_beamformer(h_d, cfg.N_S);
    const FdBeamformer fd_t = fd_beamformer(h_t, cfg.N_S);

    /* Steps 2-3: pattern book, A_i, B_i. */
    PatternBook book;
    if (cfg.pattern_order == PatternOrder::top_gain) {
        std::vector<double> g;
        for (Eigen::Index l = 0; l < a_c.cols(); ++l) g.push_back((h_d * a_c.col(l)).norm());
        book = build_pattern_book_by_gain(cfg.L, cfg.L_S, g);
    } else {
        book = build_pattern_book(cfg.L, cfg.L_S);
    }
    const BeamformerSet set = build_beamformer_set(a_c, book, fd);
    const std::vector<CMat> f = set.precoders();
    const HybridBeamformer hyb = conventional_hybrid(a_c, h_d, fd, cfg.L_S);
    const double rhs = theorem1_rhs(fd_t, f, cfg.N_S);
    const bool perfect = std::isinf(cfg.snr_h_db);

    /* Step 5: detection look-up table. */
    const PatternLookup lk = build_lookup(ue, lookup_angles(angles, truth.paths));
    Rng det_rng = stream(cfg, trial, kDetect);

    if (detail) {
        detail->true_angles = truth.paths.bs_angles;
        std::sort(detail->true_angles.begin(), detail->true_angles.end());
        detail->used_angles = angles;
        detail->beam_degenerate = std::any_of(set.patterns.begin(), set.patterns.end(),
                                              [](const HybridBeamformer& h) { return h.degenerate; });
    }

    std::vector<ResultRow> rows;
    for (double snr : cfg.snr_db) {
        const double s2 = sigma2_of(snr);
        ResultRow sp = base_row(cfg, trial, "SPIM", snr);
        sp.se_bits = se_spim({h_t, f, s2, cfg.N_S});
        sp.bound_rhs = rhs;
        const double per = pattern_error_rate_su(h_t, f, lk, book, s2, cfg.detection_symbols, det_rng);
        if (!std::isnan(per)) sp.pattern_error_rate = per;
        ResultRow hy = base_row(cfg, trial, "HYBRID", snr);
        hy.se_bits = se_precoded(h_t, hyb.f, s2, cfg.N_S);
        ResultRow fdr = base_row(cfg, trial, "FD", snr);
        fdr.se_bits = perfect ? se_fd(fd, s2, cfg.N_S) : se_precoded(h_t, fd.f, s2, cfg.N_S);
        rows.push_back(sp);
        rows.push_back(hy);
        rows.push_back(fdr);
    }
    return rows;
}

struct MuDesign {
    RisConfig psi;
    std::vector<MultiUserBeamformers> beams; // per pattern
};

std::vector<CMat> user_cascades(const MultiUserChannel& ch, const RisConfig& psi) {
    std::vector<CMat> h;
    for (int u = 0; u < ch.users(); ++u) h.push_back(cascade(ch.h_br, ch.h_ru[u], psi));
    return h;
}

/* Alternating design of the MU beamformers and RIS; analog[i] is N x U. */
MuDesign design_mu(const ScenarioConfig& cfg, const MultiUserChannel& design, const std::vector<CMat>& analog,
                   const std::vector<std::vector<CVec>>& combiners, double sigma2, Rng& rng) {
    const int U = design.users();
    QuadraticForm q{CMat::Zero(cfg.m(), cfg.m())};
    for (int u = 0; u < U; ++u) q.q += build_q(design.h_br, design.h_ru[u]).q;
    MuDesign d;
    d.psi = optimize_ris_su(q, cfg.delta_bits, RisConfig::identity(cfg.m()), cfg.ris_sweeps, cfg.quantize, 1e-12).config;
    const std::vector<double> kappa(U, std::pow(10.0, cfg.kappa_db / 10.0));
    MuRisBudget budget;
    budget.cd_sweeps = cfg.ris_sweeps;
    budget.randomizations = cfg.randomizations;
    double prev = -1.0;
    for (int it = 0; it < cfg.outer_iterations; ++it) {
        const std::vector<CMat> h = user_cascades(design, d.psi);
        d.beams.clear();
        for (std::size_t i = 0; i < analog.size(); ++i)
            d.beams.push_back(mu_beamformers(h, analog[i], combiners[i], U));
        const MuRisResult r = optimize_ris_mu(design.h_br, design.h_ru, d.beams, kappa, cfg.delta_bits, sigma2, rng,
                                              budget, &d.psi);
        d.psi = r.config;
        double worst = *std::min_element(r.sinrs.begin(), r.sinrs.end());
        if (prev >= 0 && std::abs(std::log2(1 + worst) - std::log2(1 + prev)) <= cfg.outer_tol) break;
        prev = worst;
    }
    const std::vector<CMat> h = user_cascades(design, d.psi);
    d.beams.clear();
    for (std::size_t i = 0; i < analog.size(); ++i) d.beams.push_back(mu_beamformers(h, analog[i], combiners[i], U));
    return d;
}

std::vector<ResultRow> run_multi_user(const ScenarioConfig& cfg, int trial, TrialDetail* detail) {
    const UlaSpec bs(cfg.n), ue(cfg.nbar);
    const UpaSpec ris(cfg.m_z, cfg.m_y);
    const int U = cfg.U;
    Rng ch_rng = stream(cfg, trial, kChannel);
    const MultiUserChannel truth = generate_mu_channel(bs, ris, ue, cfg.L, U, ch_rng, channel_options(cfg));
    Rng pert_rng = stream(cfg, trial, kPerturb);
    const MultiUserChannel design = perturb_channel(truth, cfg.snr_h_db, pert_rng);

    const PatternBook book = build_pattern_book(cfg.L, 1);
    std::vector<CMat> banks;
    std::vector<std::vector<double>> ue_angles;
    std::vector<PatternLookup> lookups;
    for (int u = 0; u < U; ++u) {
        /* Users train in separate slots, so each link is acquired on its own. */
        const std::vector<double> ang = acquire_angles(cfg, design.user(u), truth.paths[u], trial, u);
        banks.push_back(transmit_steering_bank(ang, bs));
        ue_angles.push_back(lookup_angles(ang, truth.paths[u]));
        lookups.push_back(build_lookup(ue, ue_angles.back()));
        if (detail && u == 0) {
            detail->true_angles = truth.paths[0].bs_angles;
            std::sort(detail->true_angles.begin(), detail->true_angles.end());
            detail->used_angles = ang;
        }
    }
    std::vector<CMat> analog;
    std::vector<std::vector<CVec>> comb;
    for (int i = 0; i < book.S; ++i) {
        CMat a(cfg.n, U);
        for (int u = 0; u < U; ++u) a.col(u) = banks[u].col(book.patterns[i][0]);
        analog.push_back(a);
        comb.push_back(mu_combiners(ue, ue_angles, book, i));
    }
    /* Conventional hybrid: the strongest path of every user, one pattern. */
    const std::vector<CMat> h_id = user_cascades(design, RisConfig::identity(cfg.m()));
    CMat a_h(cfg.n, U);
    std::vector<CVec> comb_h;
    for (int u = 0; u < U; ++u) {
        const int l = strongest_paths(banks[u], h_id[u], 1)[0];
        a_h.col(u) = banks[u].col(l);
        comb_h.push_back(ula_steering(ue, ue_angles[u][l]).conjugate());
    }

    Rng search_rng = stream(cfg, trial, kRisSearch);
    Rng det_rng = stream(cfg, trial, kDetect);
    std::vector<ResultRow> rows;
    for (double snr : cfg.snr_db) {
        const double s2 = sigma2_of(snr);
        const MuDesign spim = design_mu(cfg, design, analog, comb, s2, search_rng);
        const MuDesign hyb = design_mu(cfg, design, {a_h}, {comb_h}, s2, search_rng);
        const std::vector<CMat> h_t = user_cascades(truth, spim.psi);
        const std::vector<CMat> h_d = user_cascades(design, spim.psi);

        std::vector<std::vector<double>> gamma(U, std::vector<double>(book.S));
        for (int i = 0; i < book.S; ++i)
            for (int u = 0; u < U; ++u) gamma[u][i] = 1.0 + sinr_mu(h_t, spim.beams[i], u, s2);
        ResultRow sp = base_row(cfg, trial, "SPIM", snr);
        sp.se_bits = se_spim_mu(gamma) / U;

        if (cfg.detection_symbols > 0) {
            long errors = 0, total = 0;
            for (int i = 0; i < book.S; ++i) {
                const auto& b = spim.beams[i];
                for (int k = 0; k < cfg.detection_symbols; ++k) {
                    CVec x = CVec::Zero(cfg.n);
                    for (int v = 0; v < U; ++v) x += b.a * b.b[v] * crandn(det_rng);
                    x /= std::sqrt(static_cast<double>(U));
                    for (int u = 0; u < U; ++u) {
                        CVec y = h_t[u] * x;
                        for (Eigen::Index q = 0; q < y.size(); ++q) y[q] += crandn(det_rng, s2);
                        errors += !detect_pattern_mu(y, lookups[u], book, i).correct;
                        ++total;
                    }
                }
            }
            sp.pattern_error_rate = static_cast<double>(errors) / total;
        }

        const std::vector<CMat> h_th = user_cascades(truth, hyb.psi);
        double hy_rate = 0.0;
        for (int u = 0; u < U; ++u) hy_rate += std::log2(1.0 + sinr_mu(h_th, hyb.beams[0], u, s2));
        ResultRow hy = base_row(cfg, trial, "HYBRID", snr);
        hy.se_bits = hy_rate / U;

        double fd_rate = 0.0;
        for (int u = 0; u < U; ++u) fd_rate += se_precoded(h_t[u], fd_beamformer(h_d[u], 1).f, s2, 1);
        ResultRow fdr = base_row(cfg, trial, "FD", snr);
        fdr.se_bits = fd_rate / U;
        rows.push_back(sp);
        rows.push_back(hy);
        rows.push_back(fdr);
    }
    return rows;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int method_rank(const std::string& m) { return m == "SPIM" ? 0 : m == "HYBRID" ? 1 : m == "FD" ? 2 : 3; }

} // namespace

std::vector<ResultRow> run_trial(const ScenarioConfig& cfg, int trial, TrialDetail* detail) {
    cfg.validate();
    try {
        return cfg.link == LinkMode::single_user ? run_single_user(cfg, trial, detail)
                                                 : run_multi_user(cfg, trial, detail);
    } catch (const NumericError& e) {
        throw NumericError("scenario '" + cfg.name + "' trial " + std::to_string(trial) + ": " + e.what());
    }
}

std::vector<ResultRow> run_scenario(const std::vector<ScenarioConfig>& variants, const RunOptions& opt) {
    struct Job {
        ScenarioConfig cfg;
        std::optional<double> sweep_value;
        int trial;
    };
    std::vector<Job> jobs;
    for (ScenarioConfig v : variants) {
        if (opt.trials) v.trials = *opt.trials;
        if (opt.seed) v.seed = *opt.seed;
        v.validate();
        for (int k = 0; k < v.sweep_points(); ++k) {
            const ScenarioConfig point = v.at(k);
            point.validate();
            std::optional<double> sv;
            if (v.sweep != "none") sv = v.sweep_values[k];
            for (int t = 0; t < v.trials; ++t) jobs.push_back({point, sv, t});
        }
    }
    std::vector<std::vector<ResultRow>> out(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            try {
                out[j] = run_trial(jobs[j].cfg, jobs[j].trial);
                for (auto& r : out[j]) r.sweep_value = jobs[j].sweep_value;
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next = jobs.size();
                return;
            }
        }
    };
    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);

    std::vector<ResultRow> rows;
    for (auto& v : out)
        for (auto& r : v) rows.push_back(std::move(r));

    for (const auto& v : variants) {
        if (v.path_dump.empty()) continue;
        std::ofstream os(v.path_dump);
        if (!os) throw std::runtime_error("cannot write path dump: " + v.path_dump);
        write_path_dump_header(os);
        const UlaSpec bs(v.n), ue(v.nbar);
        const UpaSpec ris(v.m_z, v.m_y);
        const int trials = opt.trials.value_or(v.trials);
        for (int t = 0; t < trials; ++t) {
            ScenarioConfig c = v.at(0);
            if (opt.seed) c.seed = *opt.seed;
            Rng rng = stream(c, t, kChannel);
            if (c.link == LinkMode::single_user) {
                write_path_dump(os, t, make_channel(c, bs, ris, ue, rng).paths);
            } else {
                const MultiUserChannel mu = generate_mu_channel(bs, ris, ue, c.L, c.U, rng, channel_options(c));
                for (const auto& p : mu.paths) write_path_dump(os, t, p);
            }
        }
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.scenario << ',' << r.sweep_name << ',' << fmt(r.sweep_value) << ',' << r.trial << ',' << r.method << ','
           << fmt(r.snr_db) << ',' << fmt(r.se_bits) << ',' << fmt(r.bound_rhs) << ',' << fmt(r.pattern_error_rate)
           << '\n';
}

std::vector<ResultRow> read_csv(std::istream& is, const std::string& origin) {
    std::string line;
    int ln = 1;
    if (!std::getline(is, line)) throw ConfigError(origin + ":1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw ConfigError(origin + ":1: unexpected header");
    auto num = [&](const std::string& s, bool optional) -> std::optional<double> {
        if (s.empty()) {
            if (optional) return std::nullopt;
            throw ConfigError(origin + ":" + std::to_string(ln) + ": missing required value");
        }
        double x = 0.0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
            throw ConfigError(origin + ":" + std::to_string(ln) + ": bad number '" + s + "'");
        return x;
    };
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        ++ln;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != 9)
            throw ConfigError(origin + ":" + std::to_string(ln) + ": expected 9 fields, got " + std::to_string(f.size()));
        ResultRow r;
        r.scenario = f[0];
        r.sweep_name = f[1];
        r.sweep_value = num(f[2], true);
        r.trial = static_cast<int>(*num(f[3], false));
        r.method = f[4];
        if (r.method.empty()) throw ConfigError(origin + ":" + std::to_string(ln) + ": empty method");
        r.snr_db = *num(f[5], false);
        r.se_bits = *num(f[6], false);
        r.bound_rhs = num(f[7], true);
        r.pattern_error_rate = num(f[8], true);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::string, bool, double, int, std::string, double>;
    struct Acc {
        std::vector<double> se;
        double bound = 0.0;
        int nb = 0;
        double per = 0.0;
        int np = 0;
    };
    std::map<Key, Acc> acc;
    for (const auto& r : rows) {
        Key k{r.scenario, r.sweep_name, r.sweep_value.has_value(), r.sweep_value.value_or(0.0), method_rank(r.method),
              r.method, r.snr_db};
        Acc& a = acc[k];
        a.se.push_back(r.se_bits);
        if (r.bound_rhs) a.bound += *r.bound_rhs, ++a.nb;
        if (r.pattern_error_rate) a.per += *r.pattern_error_rate, ++a.np;
    }
    std::vector<SummaryRow> out;
    for (auto& [k, a] : acc) {
        SummaryRow s;
        s.scenario = std::get<0>(k);
        s.sweep_name = std::get<1>(k);
        if (std::get<2>(k)) s.sweep_value = std::get<3>(k);
        s.method = std::get<5>(k);
        s.snr_db = std::get<6>(k);
        /* Sort so the result does not depend on row order. */
        std::sort(a.se.begin(), a.se.end());
        s.count = static_cast<int>(a.se.size());
        s.mean = std::accumulate(a.se.begin(), a.se.end(), 0.0) / s.count;
        double ss = 0.0;
        for (double x : a.se) ss += (x - s.mean) * (x - s.mean);
        s.std = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
        const double half = 1.959963984540054 * s.std / std::sqrt(static_cast<double>(s.count));
        s.ci_low = s.mean - half;
        s.ci_high = s.mean + half;
        if (a.nb) s.bound_rhs_mean = a.bound / a.nb;
        if (a.np) s.pattern_error_rate_mean = a.per / a.np;
        out.push_back(s);
    }
    return out;
}

void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "scenario,sweep_name,sweep_value,method,snr_db,count,se_mean,se_std,se_ci95_low,se_ci95_high,"
          "bound_rhs_mean,pattern_error_rate_mean\n";
    for (const auto& s : rows)
        os << s.scenario << ',' << s.sweep_name << ',' << fmt(s.sweep_value) << ',' << s.method << ',' << fmt(s.snr_db)
           << ',' << s.count << ',' << fmt(s.mean) << ',' << fmt(s.std) << ',' << fmt(s.ci_low) << ','
           << fmt(s.ci_high) << ',' << fmt(s.bound_rhs_mean) << ',' << fmt(s.pattern_error_rate_mean) << '\n';
}

std::string write_outputs(const std::string& dir, const std::string& stem, const std::vector<ResultRow>& rows) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    const std::string csv = (std::filesystem::path(dir) / (stem + ".csv")).string();
    const std::string sum = (std::filesystem::path(dir) / (stem + "_summary.csv")).string();
    {
        std::ofstream os(csv);
        if (!os) throw std::runtime_error("cannot write " + csv);
        write_csv(os, rows);
        if (!os) throw std::runtime_error("write failed: " + csv);
    }
    std::ofstream os(sum);
    if (!os) throw std::runtime_error("cannot write " + sum);
    write_summary(os, summarize(rows));
    if (!os) throw std::runtime_error("write failed: " + sum);
    return csv;
}

} // namespace spim
