// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "oracles.hpp"
#include "spim/channel_acquisition.hpp"
#include "spim/channel_model.hpp"

#include <doctest.h>

#include <algorithm>

using namespace spim;

namespace {

const UlaSpec kBs(32), kUe(4);
const UpaSpec kRis(3, 3);

/* Channel whose BS angles sit on a uniform-sine grid, at distinct grid points. */
ChannelRealization on_grid_channel(const DirectionGrid& grid, int L, Rng& rng) {
    ChannelRealization ch = generate_channel(kBs, kRis, kUe, L, rng);
    std::vector<int> pick(grid.size());
    for (int p = 0; p < grid.size(); ++p) pick[p] = p;
    std::shuffle(pick.begin(), pick.end(), rng);
    for (int l = 0; l < L; ++l) ch.paths.bs_angles[l] = grid.angles[pick[l]];
    return channel_from_paths(kBs, kRis, kUe, ch.paths);
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_SUITE("channel_acquisition") {

TEST_CASE("default pilot plan shapes and power") {
    Rng rng(1);
    const PilotPlan plan = default_pilot_plan(3, 9, 4, 2, 1, 3, rng);
    CHECK(plan.slots() == 24);
    CHECK(plan.a_train.rows() == 4);
    CHECK((plan.a_train.array().abs() - 0.5).abs().maxCoeff() < 1e-12);
    CHECK((plan.a_train * plan.b_train).squaredNorm() == doctest::Approx(1.0));
    for (const auto& r : plan.ris) {
        CHECK(r.size() == 9);
        const RVec ph = r.phases();
        for (int m = 0; m < 9; ++m) CHECK(std::abs(ph[m] / (pi / 4) - std::round(ph[m] / (pi / 4))) < 1e-9);
    }
    CHECK(default_pilot_plan(3, 9, 4, 2, 1, 3, rng, 5).slots() == 5);
}

TEST_CASE("noiseless pilots match the explicit uplink product") {
    Rng rng(2);
    const auto ch = generate_channel(kBs, kRis, kUe, 3, rng);
    const PilotPlan plan = default_pilot_plan(3, 9, 4, 1, 1, 2, rng);
    const CMat r = simulate_pilots(ch, plan, 0.0, rng);
    const CMat s = plan.transmitted();
    for (int t = 0; t < plan.slots(); ++t) {
        const CVec ref = ch.h_br.transpose() * plan.ris[t].diagonal() * ch.h_ru.transpose() * s.col(t);
        CHECK((r.col(t) - ref).norm() < 1e-12 * (1 + ref.norm()));
    }
}

TEST_CASE("zero channel gives zero observation and OMP picks the first atoms") {
    Rng rng(3);
    ChannelRealization ch = generate_channel(kBs, kRis, kUe, 2, rng);
    ch.h_br.setZero();
    const PilotPlan plan = default_pilot_plan(2, 9, 4, 1, 1, 2, rng);
    const CMat r = simulate_pilots(ch, plan, 0.0, rng);
    CHECK(r.norm() == 0.0);
    const DirectionGrid grid = DirectionGrid::uniform_sine(64);
    const RecoveryResult res = omp(r, build_bs_dictionary(kBs, grid), 2);
    CHECK(res.support == std::vector<int>{0, 1});
    CHECK(res.residual_norm == 0.0);
}

TEST_CASE("noiseless observation lies in the span of the true BS steering vectors") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto ch = generate_channel(kBs, kRis, kUe, 4, rng);
        const PilotPlan plan = default_pilot_plan(4, 9, 4, 1, 1, 3, rng);
        const CMat r = simulate_pilots(ch, plan, 0.0, rng);
        CMat a(32, 4);
        for (int l = 0; l < 4; ++l) a.col(l) = ula_steering(kBs, ch.paths.bs_angles[l]);
        CHECK(ls_residual(a, r).norm() < 1e-9 * r.norm());
    }
}

TEST_CASE("scalar case: one antenna, one atom") {
    const CMat d = CMat::Constant(1, 1, cplx(1, 0));
    const CMat r = CMat::Constant(1, 3, cplx(0.5, -2));
    const RecoveryResult res = omp(r, d, 1);
    CHECK(res.support == std::vector<int>{0});
    CHECK(res.residual_norm < 1e-12);
}

TEST_CASE("a dictionary column is recovered exactly") {
    const DirectionGrid grid = DirectionGrid::uniform_sine(64);
    const CMat d = build_bs_dictionary(kBs, grid);
    for (int k : {0, 17, 40, 63}) {
        const CMat r = d.col(k) * Eigen::RowVectorXcd::Constant(4, cplx(2, 1));
        const RecoveryResult o = omp(r, d, grid, 1);
        CHECK(o.support == std::vector<int>{k});
        CHECK(o.angles[0] == doctest::Approx(grid.angles[k]));
        CHECK(o.residual_norm < 1e-10);
        const RecoveryResult c = cosamp(r, d, grid, 1);
        CHECK(c.support == o.support);
        CHECK(c.residual_norm < 1e-10);
    }
}

TEST_CASE("OMP matches the exhaustive least-squares support") {
    std::mt19937_64 g(5);
    Rng rng(5);
    const DirectionGrid grid = DirectionGrid::uniform_sine(48);
    const CMat d = build_bs_dictionary(kBs, grid);
    int agree = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const auto ch = on_grid_channel(grid, 3, rng);
        const PilotPlan plan = default_pilot_plan(3, 9, 4, 1, 1, 3, rng);
        const CMat r = simulate_pilots(ch, plan, 1e-4 * simulate_pilots(ch, plan, 0.0, rng).squaredNorm() / (32.0 * 24), rng);
        const std::vector<int> best = oracle::best_support(r, d, 3);
        agree += sorted(omp(r, d, 3).support) == best;
    }
    CHECK(agree >= trials - 1);
}

TEST_CASE("residual is orthogonal to the selected atoms and decreases") {
    std::mt19937_64 g(6);
    const DirectionGrid grid = DirectionGrid::uniform_sine(64);
    const CMat d = build_bs_dictionary(kBs, grid);
    for (int t = 0; t < 20; ++t) {
        const CMat r = oracle::randn(32, 10, g);
        const RecoveryResult res = omp(r, d, 5);
        const CMat resid = ls_residual(res.selected, r);
        CHECK((res.selected.adjoint() * resid).norm() < 1e-9 * r.norm());
        CHECK(sorted(res.support) == sorted(std::vector<int>(res.support.begin(), res.support.end())));
        for (std::size_t k = 1; k < res.residual_trace.size(); ++k)
            CHECK(res.residual_trace[k] <= res.residual_trace[k - 1] + 1e-12);
        std::vector<int> s = sorted(res.support);
        CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    }
}

TEST_CASE("noiseless on-grid paths are recovered by both algorithms") {
    Rng rng(7);
    auto rate = [&](int P, int trials) {
        const DirectionGrid grid = DirectionGrid::uniform_sine(P);
        const CMat d = build_bs_dictionary(kBs, grid);
        int omp_ok = 0, cos_ok = 0;
        for (int t = 0; t < trials; ++t) {
            const auto ch = on_grid_channel(grid, 3, rng);
            const PilotPlan plan = default_pilot_plan(3, 9, 4, 1, 1, 3, rng);
            const CMat r = simulate_pilots(ch, plan, 0.0, rng);
            std::vector<double> truth = ch.paths.bs_angles;
            std::sort(truth.begin(), truth.end());
            auto matches = [&](RecoveryResult res) {
                std::sort(res.angles.begin(), res.angles.end());
                for (int l = 0; l < 3; ++l)
                    if (std::abs(res.angles[l] - truth[l]) > 1e-9) return false;
                return true;
            };
            omp_ok += matches(omp(r, d, grid, 3));
            cos_ok += matches(cosamp(r, d, grid, 3));
        }
        return std::make_pair(omp_ok, cos_ok);
    };
    /* P = N: orthogonal atoms, recovery is exact. */
    const auto ortho = rate(32, 30);
    CHECK(ortho.first == 30);
    CHECK(ortho.second == 30);
    const auto over = rate(64, 30);
    CHECK(over.first >= 24);
    CHECK(over.second >= 24);
}

TEST_CASE("CoSaMP residual trace never increases") {
    std::mt19937_64 g(8);
    const DirectionGrid grid = DirectionGrid::uniform_sine(64);
    const CMat d = build_bs_dictionary(kBs, grid);
    for (int t = 0; t < 20; ++t) {
        const CMat r = oracle::randn(32, 12, g);
        const RecoveryResult res = cosamp(r, d, 4, 10);
        CHECK(static_cast<int>(res.support.size()) == 4);
        for (std::size_t k = 1; k < res.residual_trace.size(); ++k)
            CHECK(res.residual_trace[k] <= res.residual_trace[k - 1]);
        CHECK(res.residual_norm == doctest::Approx(ls_residual(res.selected, r).norm()));
    }
}

TEST_CASE("bad recovery inputs are rejected") {
    const CMat d = CMat::Identity(4, 4);
    CHECK_THROWS_AS(omp(CMat::Zero(3, 2), d, 1), ContractError);
    CHECK_THROWS_AS(omp(CMat::Zero(4, 2), d, 3), ContractError);
    CMat bad = CMat::Zero(4, 2);
    bad(0, 0) = cplx(0, std::nan(""));
    CHECK_THROWS_AS(cosamp(bad, d, 1), NumericError);
    CHECK_THROWS_AS(omp(CMat::Zero(4, 2), d, DirectionGrid::uniform_sine(3), 1), ContractError);
}

TEST_CASE("multi-user pilots: one user equals single user") {
    Rng rng(9);
    const auto mu = generate_mu_channel(kBs, kRis, kUe, 2, 1, rng);
    const PilotPlan plan = default_pilot_plan(2, 9, 4, 1, 1, 3, rng);
    Rng a(10), b(10);
    const CMat r_mu = simulate_pilots_mu(mu, {plan}, 0.01, a);
    const CMat r_su = simulate_pilots(mu.user(0), plan, 0.01, b);
    CHECK((r_mu - r_su).norm() < 1e-10 * r_su.norm());
}

TEST_CASE("multi-user pilot noise has variance U sigma^2") {
    Rng rng(11);
    MultiUserChannel mu = generate_mu_channel(kBs, kRis, kUe, 1, 3, rng);
    mu.h_br.setZero();
    std::vector<PilotPlan> plans;
    for (int u = 0; u < 3; ++u) plans.push_back(default_pilot_plan(1, 9, 4, 1, 1, 3, rng, 200));
    const CMat r = simulate_pilots_mu(mu, plans, 0.5, rng);
    const double var = r.squaredNorm() / r.size();
    CHECK(var == doctest::Approx(1.5).epsilon(0.1));
}

}
