// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/se_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spim {

namespace {

void check_inputs(const SeInputs& in) {
    require(in.sigma2 > 0.0, "SE: noise variance must be positive");
    require(in.n_s >= 1, "SE: N_S must be >= 1");
    require(!in.f.empty(), "SE: need at least one precoder");
    for (const auto& f : in.f) require(f.rows() == in.h.cols(), "SE: precoder rows must equal N");
}

} // namespace

CMat covariance_mi(const CMat& h, const CMat& f_i, double sigma2, int n_s) {
    require(h.cols() == f_i.rows(), "covariance_mi: dimension mismatch");
    const CMat hf = h * f_i;
    CMat m = (hf * hf.adjoint()) / static_cast<double>(n_s);
    m.diagonal().array() += sigma2;
    return m;
}

double log2det_hpd(const CMat& a) {
    if (!a.allFinite()) throw NumericError("log2det_hpd: non-finite matrix");
    Eigen::LLT<CMat> llt(a);
    if (llt.info() != Eigen::Success) throw NumericError("log2det_hpd: matrix not positive definite");
    double s = 0.0;
    const CMat& l = llt.matrixLLT();
    for (Eigen::Index k = 0; k < l.rows(); ++k) s += std::log2(l(k, k).real());
    s *= 2.0;
    if (!std::isfinite(s)) throw NumericError("log2det_hpd: non-finite determinant");
    return s;
}

double log2_sum_exp2(const std::vector<double>& x) {
    require(!x.empty(), "log2_sum_exp2: empty input");
    const double m = *std::max_element(x.begin(), x.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : x) s += std::exp2(v - m);
    return m + std::log2(s);
}

double se_spim(const SeInputs& in) {
    check_inputs(in);
    const int S = static_cast<int>(in.f.size());
    std::vector<CMat> mi;
    mi.reserve(S);
    /* Work with M_i / (2 sigma2) so the (2 sigma2)^Nbar prefactor is absorbed. */
    for (const auto& f : in.f) mi.push_back(covariance_mi(in.h, f, in.sigma2, in.n_s) / (2.0 * in.sigma2));
    double acc = 0.0;
    std::vector<double> terms(S);
    for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j) terms[j] = -log2det_hpd(mi[i] + mi[j]);
        acc += log2_sum_exp2(terms);
    }
    const double se = std::log2(static_cast<double>(S)) - acc / S;
    if (!std::isfinite(se)) throw NumericError("se_spim: non-finite result (S=" + std::to_string(S) + ")");
    return se;
}

double se_precoded(const CMat& h, const CMat& f, double sigma2, int n_s) {
    require(sigma2 > 0.0, "SE: noise variance must be positive");
    return log2det_hpd(covariance_mi(h, f, sigma2, n_s) / sigma2);
}

double se_mimo(const SeInputs& in) {
    check_inputs(in);
    return se_precoded(in.h, in.f.front(), in.sigma2, in.n_s);
}

double se_fd(const FdBeamformer& fd, double sigma2, int n_s) {
    require(sigma2 > 0.0, "se_fd: noise variance must be positive");
    require(fd.singular_values.size() >= n_s, "se_fd: need N_S singular values");
    double s = 0.0;
    for (int k = 0; k < n_s; ++k) {
        const double sv = fd.singular_values[k];
        s += std::log2(1.0 + sv * sv / (sigma2 * n_s));
    }
    return s;
}

double theorem1_rhs(const FdBeamformer& fd, const std::vector<CMat>& f, int n_s) {
    require(!f.empty(), "theorem1_rhs: need at least one precoder");
    const int S = static_cast<int>(f.size());
    std::vector<double> u(S);
    for (int z = 0; z < S; ++z) u[z] = (fd.f.adjoint() * f[z]).squaredNorm();
    double tau = 0.0;
    std::vector<double> terms(S);
    for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j) terms[j] = -(u[i] + u[j]);
        tau += log2_sum_exp2(terms);
    }
    tau /= S;
    return std::log2(S / 4.0) - n_s - tau;
}

double se_spim_mu(const std::vector<std::vector<double>>& gamma) {
    require(!gamma.empty(), "se_spim_mu: need at least one user");
    const std::size_t S = gamma.front().size();
    require(S >= 1, "se_spim_mu: need at least one pattern");
    double total = 0.0;
    std::vector<double> terms(S);
    for (const auto& g : gamma) {
        require(g.size() == S, "se_spim_mu: every user needs S gammas");
        for (double v : g) require(v >= 1.0 - 1e-12, "se_spim_mu: gamma must be >= 1");
        double acc = 0.0;
        for (std::size_t i = 0; i < S; ++i) {
            for (std::size_t j = 0; j < S; ++j) terms[j] = -std::log2(g[i] + g[j]);
            acc += log2_sum_exp2(terms);
        }
        total += std::log2(S / 2.0) - acc / static_cast<double>(S);
    }
    return total;
}

double sinr_mu(const std::vector<CMat>& h, const MultiUserBeamformers& beams, int u, double sigma2) {
    const int U = static_cast<int>(h.size());
    require(u >= 0 && u < U, "sinr_mu: user index out of range");
    require(sigma2 > 0.0, "sinr_mu: noise variance must be positive");
    const Eigen::RowVectorXcd g = beams.c[u].adjoint() * h[u] * beams.a;
    double sig = 0.0, intf = 0.0;
    for (int v = 0; v < U; ++v) {
        const cplx gb = (g * beams.b[v])(0);
        const double p = std::norm(gb) / U;
        (v == u ? sig : intf) += p;
    }
    return sig / (intf + sigma2);
}

} // namespace spim
