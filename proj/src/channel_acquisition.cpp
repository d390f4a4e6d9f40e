// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/channel_acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spim {

namespace {

CMat columns(const CMat& d, const std::vector<int>& idx) {
    CMat a(d.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) a.col(k) = d.col(idx[k]);
    return a;
}

CMat ls_solve(const CMat& a, const CMat& r) { return Eigen::CompleteOrthogonalDecomposition<CMat>(a).solve(r); }

/* Indices of the k largest values, ties to the lower index. */
std::vector<int> top_k(const RVec& v, int k) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
    idx.resize(std::min<std::size_t>(k, idx.size()));
    return idx;
}

void check_sizes(const CMat& r, const CMat& d, int L) {
    require(r.rows() == d.rows(), "sparse recovery: observation and dictionary row mismatch");
    require(L >= 1 && L <= d.cols() && L <= r.cols(), "sparse recovery: need 1 <= L <= min(P_BS, T)");
    if (!r.allFinite()) throw NumericError("sparse recovery: non-finite observation");
}

void fill_angles(RecoveryResult& res, const DirectionGrid& grid) {
    res.angles.clear();
    for (int k : res.support) res.angles.push_back(grid.angles.at(k));
}

} // namespace

PilotPlan default_pilot_plan(int L, int m, int nbar, int n_rf, int n_s, int delta_bits, Rng& rng, int slots) {
    require(L >= 1 && m >= 1 && nbar >= 1 && n_rf >= 1 && n_s >= 1 && n_s <= n_rf, "default_pilot_plan: bad sizes");
    const int T = slots > 0 ? slots : 8 * L;
    PilotPlan plan;
    const int levels = delta_bits > 0 ? 1 << delta_bits : 0;
    std::uniform_int_distribution<int> level(0, std::max(levels - 1, 0));
    for (int t = 0; t < T; ++t) {
        RVec ph(m);
        for (int k = 0; k < m; ++k) ph[k] = levels ? 2.0 * pi * level(rng) / levels : uniform(rng, 0.0, 2.0 * pi);
        plan.ris.push_back(RisConfig::from_phases(ph, delta_bits));
    }
    plan.a_train.resize(nbar, n_rf);
    for (int j = 0; j < n_rf; ++j)
        for (int i = 0; i < nbar; ++i) plan.a_train(i, j) = std::polar(1.0 / std::sqrt(double(nbar)), uniform(rng, 0.0, 2.0 * pi));
    plan.b_train = CMat::Identity(n_rf, n_s);
    plan.b_train *= std::sqrt(n_s / (plan.a_train * plan.b_train).squaredNorm());
    plan.symbols = CMat::Constant(n_s, T, cplx(1.0 / std::sqrt(double(n_s)), 0.0));
    return plan;
}

CMat simulate_pilots(const ChannelRealization& ch, const PilotPlan& plan, double noise_var, Rng& rng) {
    const CMat s = plan.transmitted();
    require(s.rows() == ch.nbar(), "simulate_pilots: pilot length must equal Nbar");
    const CMat g_br = ch.g_br();
    const CMat g_ru = ch.g_ru();
    CMat r(ch.n(), plan.slots());
    for (int t = 0; t < plan.slots(); ++t) {
        require(plan.ris[t].size() == ch.m(), "simulate_pilots: RIS size mismatch");
        r.col(t) = g_br * (plan.ris[t].psi.asDiagonal() * (g_ru * s.col(t)));
    }
    if (noise_var > 0.0)
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) += crandn(rng, noise_var);
    return r;
}

CMat simulate_pilots_mu(const MultiUserChannel& ch, const std::vector<PilotPlan>& plans, double noise_var, Rng& rng) {
    const int U = ch.users();
    require(U >= 1 && static_cast<int>(plans.size()) == U, "simulate_pilots_mu: one plan per user");
    const int T = plans[0].slots();
    const CMat g_br = ch.h_br.transpose();
    CMat r = CMat::Zero(ch.h_br.cols(), T);
    for (int u = 0; u < U; ++u) {
        require(plans[u].slots() == T, "simulate_pilots_mu: plans must share T");
        const CMat s = plans[u].transmitted();
        const CMat g_ru = ch.h_ru[u].transpose();
        for (int t = 0; t < T; ++t) r.col(t) += g_br * (plans[0].ris[t].psi.asDiagonal() * (g_ru * s.col(t)));
    }
    if (noise_var > 0.0)
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) += crandn(rng, U * noise_var);
    return r;
}

CMat ls_residual(const CMat& a, const CMat& r) {
    if (a.cols() == 0) return r;
    return r - a * ls_solve(a, r);
}

RecoveryResult omp(const CMat& r, const CMat& d, int L) {
    check_sizes(r, d, L);
    RecoveryResult res;
    std::vector<char> used(d.cols(), 0);
    CMat res_mat = r;
    for (int k = 0; k < L; ++k) {
        const RVec energy = (d.adjoint() * res_mat).rowwise().squaredNorm();
        int best = -1;
        for (Eigen::Index p = 0; p < d.cols(); ++p) {
            if (used[p]) continue;
            if (best < 0 || energy[p] > energy[best]) best = static_cast<int>(p);
        }
        used[best] = 1;
        res.support.push_back(best);
        res.selected = columns(d, res.support);
        res_mat = ls_residual(res.selected, r);
        res.residual_trace.push_back(res_mat.norm());
    }
    res.residual_norm = res_mat.norm();
    return res;
}

RecoveryResult omp(const CMat& r, const CMat& d, const DirectionGrid& grid, int L) {
    require(grid.size() == d.cols(), "omp: grid size must equal dictionary width");
    RecoveryResult res = omp(r, d, L);
    fill_angles(res, grid);
    return res;
}

RecoveryResult cosamp(const CMat& r, const CMat& d, int L, int max_iter) {
    check_sizes(r, d, L);
    require(max_iter >= 1, "cosamp: max_iter must be >= 1");
    RecoveryResult res;
    std::vector<int> support;
    CMat res_mat = r;
    double prev = r.norm();
    const int width = static_cast<int>(std::min<Eigen::Index>(d.cols(), d.rows()));
    for (int it = 0; it < max_iter; ++it) {
        const RVec proxy = (d.adjoint() * res_mat).rowwise().squaredNorm();
        std::vector<int> merged = top_k(proxy, std::min(2 * L, static_cast<int>(d.cols())));
        for (int k : support)
            if (std::find(merged.begin(), merged.end(), k) == merged.end()) merged.push_back(k);
        std::sort(merged.begin(), merged.end());
        if (static_cast<int>(merged.size()) > width) merged.resize(width);
        const CMat x = ls_solve(columns(d, merged), r);
        const std::vector<int> keep = top_k(x.rowwise().squaredNorm(), L);
        std::vector<int> cand;
        for (int k : keep) cand.push_back(merged[k]);
        const CMat next = ls_residual(columns(d, cand), r);
        const double nrm = next.norm();
        if (!support.empty() && nrm > prev) break;
        support = cand;
        res_mat = next;
        res.residual_trace.push_back(nrm);
        const bool stalled = prev - nrm <= 1e-12 * std::max(1.0, r.norm());
        prev = nrm;
        if (stalled && it > 0) break;
    }
    res.support = support;
    res.selected = columns(d, support);
    res.residual_norm = res_mat.norm();
    return res;
}

RecoveryResult cosamp(const CMat& r, const CMat& d, const DirectionGrid& grid, int L, int max_iter) {
    require(grid.size() == d.cols(), "cosamp: grid size must equal dictionary width");
    RecoveryResult res = cosamp(r, d, L, max_iter);
    fill_angles(res, grid);
    return res;
}

} // namespace spim
