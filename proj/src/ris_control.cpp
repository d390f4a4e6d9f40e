// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/ris_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spim {

RisConfig RisConfig::from_phases(const RVec& phases, int bits) {
    CVec p(phases.size());
    for (Eigen::Index m = 0; m < phases.size(); ++m) p[m] = std::polar(1.0, phases[m]);
    return RisConfig(std::move(p), bits);
}

RVec RisConfig::phases() const {
    RVec ph(psi.size());
    for (Eigen::Index m = 0; m < psi.size(); ++m) {
        double a = std::arg(psi[m]);
        if (a < 0) a += 2.0 * pi;
        if (a >= 2.0 * pi) a -= 2.0 * pi;
        ph[m] = a;
    }
    return ph;
}

QuadraticForm build_q(const CMat& h_br, const CMat& h_ru) {
    require(h_br.rows() == h_ru.cols(), "build_q: RIS dimension mismatch");
    const CMat k = h_br * h_br.adjoint();
    const CMat r = h_ru.transpose() * h_ru.conjugate();
    return {k.cwiseProduct(r).transpose()};
}

QuadraticForm build_q(const ChannelRealization& ch) { return build_q(ch.h_br, ch.h_ru); }

double ris_objective(const QuadraticForm& q, const CVec& psi) { return psi.dot(q.q * psi).real(); }

RisConfig quantize_phases(const RisConfig& in, int delta_bits, QuantizeRule rule) {
    require(delta_bits >= 1, "quantize_phases: delta_bits must be >= 1");
    const double step = 2.0 * pi / static_cast<double>(1 << delta_bits);
    const int levels = 1 << delta_bits;
    const RVec ph = in.phases();
    RVec out(ph.size());
    for (Eigen::Index m = 0; m < ph.size(); ++m) {
        /* 1e-9 keeps on-grid phases fixed despite rounding in arg(). */
        const double x = ph[m] / step;
        int k = rule == QuantizeRule::floor ? static_cast<int>(std::floor(x + 1e-9)) : static_cast<int>(std::lround(x));
        k %= levels;
        out[m] = k * step;
    }
    return RisConfig::from_phases(out, delta_bits);
}

SuRisResult optimize_ris_su(const QuadraticForm& q, int delta_bits, const RisConfig& init, int sweeps,
                            QuantizeRule rule, double tol) {
    require(sweeps >= 1, "optimize_ris_su: sweeps must be >= 1");
    const Eigen::Index m = q.q.rows();
    require(init.size() == m, "optimize_ris_su: init size mismatch");
    SuRisResult res;
    CVec psi = init.psi;
    for (Eigen::Index k = 0; k < m; ++k) psi[k] = std::polar(1.0, std::arg(psi[k]));
    res.objective.push_back(ris_objective(q, psi));
    for (int s = 0; s < sweeps; ++s) {
        for (Eigen::Index k = 0; k < m; ++k) {
            const cplx zeta = (q.q.row(k) * psi)(0) - q.q(k, k) * psi[k];
            if (std::abs(zeta) > 0.0) psi[k] = std::polar(1.0, std::arg(zeta));
        }
        res.objective.push_back(ris_objective(q, psi));
        const double prev = res.objective[res.objective.size() - 2];
        if (tol > 0.0 && res.objective.back() - prev <= tol * std::abs(prev)) break;
    }
    res.continuous = RisConfig(psi, 0);
    res.config = delta_bits > 0 ? quantize_phases(res.continuous, delta_bits, rule) : res.continuous;
    return res;
}

ZVectors mu_z_vectors(const CMat& h_br, const std::vector<CMat>& h_ru, const MultiUserBeamformers& beams) {
    const int U = static_cast<int>(h_ru.size());
    std::vector<CVec> x(U);
    for (int v = 0; v < U; ++v) x[v] = h_br * (beams.a * beams.b[v]);
    ZVectors z(U, std::vector<CVec>(U));
    for (int u = 0; u < U; ++u) {
        const CVec r = (beams.c[u].adjoint() * h_ru[u]).transpose();
        for (int v = 0; v < U; ++v) z[u][v] = r.cwiseProduct(x[v]);
    }
    return z;
}

std::vector<double> mu_sinrs(const ZVectors& z, const CVec& psi, double sigma2) {
    const int U = static_cast<int>(z.size());
    std::vector<double> s(U);
    for (int u = 0; u < U; ++u) {
        double sig = 0.0, intf = 0.0;
        for (int v = 0; v < U; ++v) {
            const double p = std::norm(static_cast<cplx>(psi.transpose() * z[u][v])) / U;
            (v == u ? sig : intf) += p;
        }
        s[u] = sig / (intf + sigma2);
    }
    return s;
}

namespace {

struct MuState {
    const std::vector<ZVectors>* z;
    std::vector<double> log_kappa;
    double sigma2;
    int U;

    /* Worst log(SINR / kappa) over users and patterns, from cached amplitudes p[i][u][v]. */
    double score(const std::vector<std::vector<std::vector<cplx>>>& p) const {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& pi_ : p)
            for (int u = 0; u < U; ++u) {
                double sig = 0.0, intf = 0.0;
                for (int v = 0; v < U; ++v) (v == u ? sig : intf) += std::norm(pi_[u][v]) / U;
                const double sinr = sig / (intf + sigma2);
                worst = std::min(worst, std::log(std::max(sinr, 1e-300)) - log_kappa[u]);
            }
        return worst;
    }

    std::vector<std::vector<std::vector<cplx>>> amplitudes(const CVec& psi) const {
        std::vector<std::vector<std::vector<cplx>>> p(z->size(), std::vector<std::vector<cplx>>(U, std::vector<cplx>(U)));
        for (std::size_t i = 0; i < z->size(); ++i)
            for (int u = 0; u < U; ++u)
                for (int v = 0; v < U; ++v) p[i][u][v] = (psi.transpose() * (*z)[i][u][v])(0);
        return p;
    }
};

} // namespace

MuRisResult optimize_ris_mu(const CMat& h_br, const std::vector<CMat>& h_ru,
                            const std::vector<MultiUserBeamformers>& beams, const std::vector<double>& kappa,
                            int delta_bits, double sigma2, Rng& rng, const MuRisBudget& budget,
                            const RisConfig* init) {
    const int U = static_cast<int>(h_ru.size());
    const Eigen::Index M = h_br.rows();
    require(!beams.empty(), "optimize_ris_mu: need beams for at least one pattern");
    require(static_cast<int>(kappa.size()) == U, "optimize_ris_mu: one threshold per user");
    require(sigma2 > 0.0, "optimize_ris_mu: noise variance must be positive");

    std::vector<ZVectors> z;
    for (const auto& b : beams) z.push_back(mu_z_vectors(h_br, h_ru, b));

    /* (a) single-user coordinate descent on the summed desired-signal energy. */
    QuadraticForm q{CMat::Zero(M, M)};
    for (const auto& zi : z)
        for (int u = 0; u < U; ++u) {
            const CVec w = zi[u][u].conjugate();
            q.q += w * w.adjoint();
        }
    const RisConfig start = init ? *init : RisConfig::identity(static_cast<int>(M));
    const int grid_bits = delta_bits > 0 ? delta_bits : 4;
    CVec psi = optimize_ris_su(q, grid_bits, start, budget.cd_sweeps).config.psi;

    MuState st{&z, {}, sigma2, U};
    for (double k : kappa) st.log_kappa.push_back(std::log(std::max(k, 1e-300)));

    /* (b) element-wise greedy over the phase alphabet. */
    const int levels = 1 << grid_bits;
    std::vector<cplx> alphabet(levels);
    for (int k = 0; k < levels; ++k) alphabet[k] = std::polar(1.0, 2.0 * pi * k / levels);
    auto p = st.amplitudes(psi);
    double best = st.score(p);
    for (int sweep = 0; sweep < budget.greedy_sweeps; ++sweep) {
        bool improved = false;
        for (Eigen::Index m = 0; m < M; ++m) {
            int best_k = -1;
            for (int k = 0; k < levels; ++k) {
                const cplx d = alphabet[k] - psi[m];
                if (std::abs(d) < 1e-12) continue;
                auto trial = p;
                for (std::size_t i = 0; i < z.size(); ++i)
                    for (int u = 0; u < U; ++u)
                        for (int v = 0; v < U; ++v) trial[i][u][v] += d * z[i][u][v][m];
                const double s = st.score(trial);
                if (s > best + 1e-12) {
                    best = s;
                    best_k = k;
                }
            }
            if (best_k >= 0) {
                const cplx d = alphabet[best_k] - psi[m];
                for (std::size_t i = 0; i < z.size(); ++i)
                    for (int u = 0; u < U; ++u)
                        for (int v = 0; v < U; ++v) p[i][u][v] += d * z[i][u][v][m];
                psi[m] = alphabet[best_k];
                improved = true;
            }
        }
        if (!improved) break;
    }

    /* (c) Gaussian randomization around the incumbent. */
    std::normal_distribution<double> jitter(0.0, budget.randomization_std);
    const CVec center = psi;
    for (int r = 0; r < budget.randomizations; ++r) {
        RVec ph(M);
        for (Eigen::Index m = 0; m < M; ++m) ph[m] = std::arg(center[m]) + jitter(rng);
        const CVec cand = quantize_phases(RisConfig::from_phases(ph), grid_bits, QuantizeRule::round).psi;
        const double s = st.score(st.amplitudes(cand));
        if (s > best) {
            best = s;
            psi = cand;
        }
    }

    MuRisResult res;
    res.config = RisConfig(psi, delta_bits);
    res.table.assign(U, std::vector<double>(z.size()));
    res.sinrs.assign(U, std::numeric_limits<double>::infinity());
    res.feasible = true;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto s = mu_sinrs(z[i], psi, sigma2);
        for (int u = 0; u < U; ++u) {
            res.table[u][i] = s[u];
            res.sinrs[u] = std::min(res.sinrs[u], s[u]);
            if (!(s[u] >= kappa[u])) res.feasible = false;
        }
    }
    return res;
}

} // namespace spim
