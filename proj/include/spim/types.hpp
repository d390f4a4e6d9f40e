// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace spim {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

using Rng = std::mt19937_64;

/* Raised when a computation produces non-finite or undefined values. */
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/* Raised on violated preconditions (dimension mismatch, bad index). */
class ContractError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double pi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * pi / 180.0; }

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractError(what);
}

/* Standard circular complex Gaussian with E|x|^2 = var. */
inline cplx crandn(Rng& rng, double var = 1.0) {
    std::normal_distribution<double> n01(0.0, 1.0);
    const double s = std::sqrt(var / 2.0);
    const double re = n01(rng);
    const double im = n01(rng);
    return {s * re, s * im};
}

inline double uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

/* SplitMix64 finalizer, used to derive independent seed streams. */
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
    return mix64(mix64(mix64(master) ^ trial) ^ (stream * 0x2545f4914f6cdd1dULL));
}

} // namespace spim
