// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "oracles.hpp"
#include "spim/spim_receiver.hpp"

#include <doctest.h>

using namespace spim;

namespace {

const UlaSpec kUe(8);

/* Downlink observations carry conjugate user steering vectors. Sine spacing 2/Nbar makes the user steering vectors orthogonal. */
std::vector<double> orthogonal_ue_angles(int L) {
    std::vector<double> a;
    for (int l = 0; l < L; ++l) a.push_back(std::asin(-0.875 + 0.25 * l) * 180 / pi);
    return a;
}

CVec pattern_signal(const std::vector<double>& ang, const Subset& s, std::mt19937_64& g) {
    CVec y = CVec::Zero(kUe.num_elements);
    for (int l : s) y += std::polar(1.0, std::uniform_real_distribution<double>(0, 2 * pi)(g)) * ula_steering(kUe, ang[l]).conjugate();
    return y;
}

} // namespace

TEST_SUITE("spim_receiver") {

TEST_CASE("lookup holds conjugate user steering vectors") {
    const auto ang = orthogonal_ue_angles(4);
    const PatternLookup lk = build_lookup(kUe, ang);
    REQUIRE(lk.receive.size() == 4);
    for (int l = 0; l < 4; ++l) CHECK((lk.receive[l] - oracle::ula(8, ang[l]).conjugate()).norm() < 1e-12);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < a; ++b) CHECK(std::abs(lk.receive[a].dot(lk.receive[b])) < 1e-12);
}

TEST_CASE("zero observation picks the lowest path indices") {
    const PatternBook book = build_pattern_book(5, 2);
    const DetectionResult r = detect_pattern(CVec::Zero(8), build_lookup(kUe, orthogonal_ue_angles(5)), book, 0);
    CHECK(r.subset == Subset{0, 1});
    CHECK(r.pattern_index == 0);
    CHECK(r.in_book);
    CHECK(r.correct);
}

TEST_CASE("noiseless orthogonal paths are detected exactly") {
    std::mt19937_64 g(1);
    for (int ls : {1, 2, 3}) {
        const PatternBook book = build_pattern_book(6, ls);
        const auto ang = orthogonal_ue_angles(6);
        const PatternLookup lk = build_lookup(kUe, ang);
        for (int i = 0; i < book.S; ++i) {
            const DetectionResult r = detect_pattern(pattern_signal(ang, book.patterns[i], g), lk, book, i);
            CHECK(r.correct);
            CHECK(r.bits == pattern_to_bits(book, i));
        }
    }
}

TEST_CASE("path strengths are scale invariant in ranking") {
    std::mt19937_64 g(2);
    const PatternBook book = build_pattern_book(4, 2);
    const auto ang = orthogonal_ue_angles(4);
    const PatternLookup lk = build_lookup(kUe, ang);
    for (int t = 0; t < 20; ++t) {
        const CVec y = oracle::randn(8, 1, g).col(0);
        const auto n1 = path_strengths(y, lk);
        const auto n2 = path_strengths(y * cplx(0, 7.5), lk);
        for (int l = 0; l < 4; ++l) CHECK(n2[l] == doctest::Approx(7.5 * n1[l]));
        CHECK(detect_pattern(y, lk, book).pattern_index == detect_pattern(y * 1e-6, lk, book).pattern_index);
    }
}

TEST_CASE("out-of-book subsets fall back to the best-overlapping pattern") {
    const PatternBook book = build_pattern_book(4, 2); // {0,1},{0,2},{0,3},{1,2}
    const auto ang = orthogonal_ue_angles(4);
    const PatternLookup lk = build_lookup(kUe, ang);
    const CVec y = (2.0 * ula_steering(kUe, ang[3]) + 1.5 * ula_steering(kUe, ang[2]) + 0.1 * ula_steering(kUe, ang[0])).conjugate();
    const DetectionResult r = detect_pattern(y, lk, book, 2);
    CHECK(r.subset == Subset{2, 3});
    CHECK(!r.in_book);
    CHECK(r.pattern_index == 1);
    CHECK(!r.correct);
}

TEST_CASE("pattern error rate falls with SNR") {
    std::mt19937_64 g(3);
    const PatternBook book = build_pattern_book(6, 2);
    const auto ang = orthogonal_ue_angles(6);
    const PatternLookup lk = build_lookup(kUe, ang);
    std::vector<double> per;
    for (double snr_db : {-10.0, 0.0, 10.0}) {
        const double nv = std::pow(10.0, -snr_db / 10);
        int err = 0;
        const int n = 2000;
        for (int t = 0; t < n; ++t) {
            const int i = t % book.S;
            const CVec y = pattern_signal(ang, book.patterns[i], g) + oracle::randn(8, 1, g, nv / 8).col(0);
            err += !detect_pattern(y, lk, book, i).correct;
        }
        per.push_back(double(err) / n);
    }
    CHECK(per[0] > per[1]);
    CHECK(per[1] > per[2]);
    CHECK(per[2] < 0.01);
}

TEST_CASE("index bit error rate") {
    const PatternBook book = build_pattern_book(5, 2); // S = 8, 3 bits
    auto result = [&](int tx, int rx) {
        DetectionResult r;
        r.transmitted = tx;
        r.pattern_index = rx;
        r.bits = pattern_to_bits(book, rx);
        r.correct = tx == rx;
        return r;
    };
    CHECK(index_bit_error_rate({result(3, 3), result(5, 5)}, book) == 0.0);
    CHECK(index_bit_error_rate({result(0, 7)}, book) == doctest::Approx(1.0));
    CHECK(index_bit_error_rate({result(0, 1), result(0, 0)}, book) == doctest::Approx(1.0 / 6));
    const PatternBook one = build_pattern_book(3, 3);
    CHECK(index_bit_error_rate({result(0, 0)}, one) == 0.0);
    CHECK_THROWS_AS(index_bit_error_rate({}, book), ContractError);

    std::mt19937_64 g(4);
    std::uniform_int_distribution<int> pick(0, book.S - 1);
    std::vector<DetectionResult> guesses;
    for (int t = 0; t < 20000; ++t) guesses.push_back(result(pick(g), pick(g)));
    CHECK(index_bit_error_rate(guesses, book) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("multi-user detection uses the same rule") {
    std::mt19937_64 g(5);
    const PatternBook book = build_pattern_book(4, 1);
    const PatternLookup lk = build_lookup(kUe, orthogonal_ue_angles(4));
    for (int t = 0; t < 20; ++t) {
        const CVec y = oracle::randn(8, 1, g).col(0);
        CHECK(detect_pattern_mu(y, lk, book).pattern_index == detect_pattern(y, lk, book).pattern_index);
    }
}

}
