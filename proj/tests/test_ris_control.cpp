// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "oracles.hpp"
#include "spim/beamformers.hpp"
#include "spim/channel_model.hpp"
#include "spim/ris_control.hpp"

#include <doctest.h>

#include <limits>

using namespace spim;

namespace {

ChannelRealization small_channel(std::uint64_t seed, int L = 4) {
    Rng rng(seed);
    return generate_channel(UlaSpec(16), UpaSpec(3, 3), UlaSpec(4), L, rng);
}

double wrap_diff(double a, double b) {
    double d = std::fmod(a - b, 2 * pi);
    if (d < 0) d += 2 * pi;
    return d;
}

} // namespace

TEST_SUITE("ris_control") {

TEST_CASE("psi^H Q psi equals ||H_RU Psi H_BR||^2") {
    std::mt19937_64 g(1);
    for (int t = 0; t < 50; ++t) {
        const auto ch = small_channel(100 + t);
        const QuadraticForm q = build_q(ch);
        const CVec psi = oracle::random_phases(ch.m(), g);
        const double ref = oracle::frob2(ch.h_ru, psi, ch.h_br);
        CHECK(std::abs(ris_objective(q, psi) - ref) <= 1e-8 * ref);
        CHECK((q.q - q.q.adjoint()).norm() < 1e-10 * q.q.norm());
        CHECK(Eigen::SelfAdjointEigenSolver<CMat>(q.q).eigenvalues().minCoeff() > -1e-9 * q.q.norm());
    }
}

TEST_CASE("Q is zero when H_RU is zero") {
    std::mt19937_64 g(2);
    const QuadraticForm q = build_q(oracle::randn(5, 8, g), CMat::Zero(3, 5));
    CHECK(q.q.norm() == 0.0);
}

TEST_CASE("M = 1 reduces to a scalar channel energy") {
    std::mt19937_64 g(3);
    const CMat h_br = oracle::randn(1, 6, g);
    const CMat h_ru = oracle::randn(4, 1, g);
    const QuadraticForm q = build_q(h_br, h_ru);
    CHECK(q.q(0, 0).real() == doctest::Approx(h_br.squaredNorm() * h_ru.squaredNorm()));
    const SuRisResult r = optimize_ris_su(q, 2, RisConfig::from_phases(RVec::Constant(1, 2.0)), 5);
    CHECK(r.continuous.phases()[0] == doctest::Approx(2.0));
    CHECK(r.config.phases()[0] == doctest::Approx(pi / 2));
}

TEST_CASE("coordinate descent never decreases the objective") {
    std::mt19937_64 g(4);
    for (int t = 0; t < 30; ++t) {
        const QuadraticForm q{oracle::random_psd(12, g, 3)};
        const SuRisResult r = optimize_ris_su(q, 0, RisConfig(oracle::random_phases(12, g), 0), 20);
        CHECK(r.objective.size() == 21);
        for (std::size_t s = 1; s < r.objective.size(); ++s)
            CHECK(r.objective[s] >= r.objective[s - 1] - 1e-9 * std::abs(r.objective[s - 1]));
        CHECK((r.continuous.psi.array().abs() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Q = cI leaves the start point unchanged") {
    std::mt19937_64 g(5);
    const CVec p0 = oracle::random_phases(6, g);
    const SuRisResult r = optimize_ris_su({2.5 * CMat::Identity(6, 6)}, 0, RisConfig(p0, 0), 3);
    CHECK((r.continuous.psi - p0).norm() < 1e-12);
    CHECK(r.objective.back() == doctest::Approx(15.0));
}

TEST_CASE("tolerance stops early once the objective settles") {
    std::mt19937_64 g(6);
    const QuadraticForm q{oracle::random_psd(8, g, 2)};
    const SuRisResult r = optimize_ris_su(q, 0, RisConfig::identity(8), 200, QuantizeRule::floor, 1e-12);
    CHECK(r.objective.size() < 201);
}

TEST_CASE("coordinate descent beats random search on real channels") {
    std::mt19937_64 g(7);
    for (int t = 0; t < 10; ++t) {
        const auto ch = small_channel(200 + t);
        const QuadraticForm q = build_q(ch);
        double best = 0.0;
        for (int k = 0; k < 5000; ++k) best = std::max(best, oracle::frob2(ch.h_ru, oracle::random_phases(ch.m(), g), ch.h_br));
        const SuRisResult r = optimize_ris_su(q, 0, RisConfig::identity(ch.m()), 20);
        CHECK(r.objective.back() >= 0.95 * best);
    }
}

TEST_CASE("quantization examples") {
    RVec ph(5);
    ph << 0.0, pi / 4, pi / 4 - 1e-3, 2 * pi - 1e-3, 3 * pi / 8 + 1e-12;
    const RisConfig in = RisConfig::from_phases(ph);
    const RVec f = quantize_phases(in, 2).phases();
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(0.0));
    CHECK(f[2] == doctest::Approx(0.0));
    CHECK(f[3] == doctest::Approx(3 * pi / 2));
    const RVec f3 = quantize_phases(in, 3).phases();
    CHECK(f3[1] == doctest::Approx(pi / 4));
    CHECK(f3[2] == doctest::Approx(0.0));
    CHECK(f3[4] == doctest::Approx(pi / 4));
    const RVec r = quantize_phases(in, 2, QuantizeRule::round).phases();
    CHECK(r[3] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(pi / 2));
    CHECK(quantize_phases(in, 1).delta_bits == 1);
    CHECK_THROWS_AS(quantize_phases(in, 0), ContractError);
}

TEST_CASE("quantization error is below one step and output is on the grid") {
    std::mt19937_64 g(8);
    for (int bits = 1; bits <= 4; ++bits) {
        const double step = 2 * pi / (1 << bits);
        const RisConfig in(oracle::random_phases(500, g), 0);
        const RisConfig out = quantize_phases(in, bits);
        const RVec a = in.phases(), b = out.phases();
        for (int m = 0; m < 500; ++m) {
            CHECK(wrap_diff(a[m], b[m]) < step + 1e-12);
            const double k = b[m] / step;
            CHECK(std::abs(k - std::round(k)) < 1e-9);
            CHECK(std::abs(std::abs(out.psi[m]) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("objective is invariant to a global RIS phase") {
    std::mt19937_64 g(9);
    const QuadraticForm q{oracle::random_psd(7, g)};
    const CVec psi = oracle::random_phases(7, g);
    CHECK(ris_objective(q, psi * std::polar(1.0, 1.3)) == doctest::Approx(ris_objective(q, psi)));
}

TEST_CASE("z-vectors reproduce the effective scalar channel") {
    Rng rng(10);
    std::mt19937_64 g(10);
    const UlaSpec bs(16), ue(4);
    const auto mu = generate_mu_channel(bs, UpaSpec(3, 3), ue, 2, 3, rng);
    const CMat a = build_steering_bank({-30.0, 5.0, 40.0}, bs);
    std::vector<CVec> c;
    for (int u = 0; u < 3; ++u) c.push_back(ula_steering(ue, mu.paths[u].ue_angles[0]).conjugate());
    const CVec psi = oracle::random_phases(9, g);
    std::vector<CMat> h;
    for (int u = 0; u < 3; ++u) h.push_back(cascade(mu.h_br, mu.h_ru[u], RisConfig(psi, 0)));
    const MultiUserBeamformers mb = mu_beamformers(h, a, c, 3);
    const ZVectors z = mu_z_vectors(mu.h_br, mu.h_ru, mb);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) {
            const cplx direct = (c[u].adjoint() * h[u] * a * mb.b[v])(0);
            const cplx viaz = (psi.transpose() * z[u][v])(0);
            CHECK(std::abs(direct - viaz) < 1e-10 * (1 + std::abs(direct)));
        }
}

TEST_CASE("multi-user search: trivial and impossible thresholds") {
    Rng rng(11);
    const UlaSpec bs(16), ue(4);
    const auto mu = generate_mu_channel(bs, UpaSpec(3, 3), ue, 2, 1, rng);
    const CMat a = build_steering_bank({mu.paths[0].bs_angles[0]}, bs).conjugate();
    const std::vector<CVec> c = {ula_steering(ue, mu.paths[0].ue_angles[0]).conjugate()};
    const CMat h = cascade(mu.h_br, mu.h_ru[0], RisConfig::identity(9));
    const MultiUserBeamformers mb = mu_beamformers({h}, a, c, 1);
    MuRisBudget budget;
    budget.randomizations = 10;
    const MuRisResult ok = optimize_ris_mu(mu.h_br, mu.h_ru, {mb}, {1.0}, 3, 1.0, rng, budget);
    const MuRisResult none = optimize_ris_mu(mu.h_br, mu.h_ru, {mb}, {0.0}, 3, 1.0, rng, budget);
    CHECK(none.feasible);
    CHECK(none.sinrs[0] > 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    const MuRisResult bad = optimize_ris_mu(mu.h_br, mu.h_ru, {mb}, {inf}, 3, 1.0, rng, budget);
    CHECK(!bad.feasible);
    CHECK(ok.table.size() == 1);
    CHECK(ok.table[0].size() == 1);
    CHECK(ok.config.size() == 9);
    const RVec ph = ok.config.phases();
    for (int m = 0; m < 9; ++m) CHECK(std::abs(ph[m] / (pi / 4) - std::round(ph[m] / (pi / 4))) < 1e-9);
}

TEST_CASE("multi-user search with non-interfering users is feasible") {
    /* Each user sees only its own RIS element group, so cross z-vectors vanish. */
    const int M = 4;
    CMat h_br = CMat::Zero(M, 2);
    h_br(0, 0) = h_br(1, 0) = 1.0;
    h_br(2, 1) = h_br(3, 1) = 1.0;
    std::vector<CMat> h_ru(2, CMat::Zero(1, M));
    h_ru[0](0, 0) = h_ru[0](0, 1) = 1.0;
    h_ru[1](0, 2) = h_ru[1](0, 3) = 1.0;
    MultiUserBeamformers mb;
    mb.a = CMat::Identity(2, 2);
    mb.b = {CVec::Unit(2, 0), CVec::Unit(2, 1)};
    mb.c = {CVec::Ones(1), CVec::Ones(1)};
    const ZVectors z = mu_z_vectors(h_br, h_ru, mb);
    CHECK(z[0][1].norm() == 0.0);
    CHECK(z[1][0].norm() == 0.0);
    Rng rng(12);
    const MuRisResult r = optimize_ris_mu(h_br, h_ru, {mb}, {3.0, 3.0}, 2, 0.5, rng);
    CHECK(r.feasible);
    /* Coherent pair: |2|^2 / U / sigma2 = 4. */
    CHECK(r.sinrs[0] == doctest::Approx(4.0));
    CHECK(r.sinrs[1] == doctest::Approx(4.0));
}

}
