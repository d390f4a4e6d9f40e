// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/beamformers.hpp"
#include "spim/types.hpp"

#include <vector>

namespace spim {

struct SeInputs {
    const CMat& h;                 // Nbar x N cascaded channel
    const std::vector<CMat>& f;    // one precoder per pattern
    double sigma2;
    int n_s;
};

struct SeReport {
    double i_spim = 0.0;
    double i_mimo = 0.0;
    double i_fd = 0.0;
    double bound_rhs = 0.0;
    std::vector<double> per_user;
    std::vector<std::vector<double>> sinr; // [u][i]
};

CMat covariance_mi(const CMat& h, const CMat& f_i, double sigma2, int n_s);

/* log2 det of a Hermitian positive definite matrix via Cholesky. */
double log2det_hpd(const CMat& a);

/* log2 sum_j 2^x_j without overflow. */
double log2_sum_exp2(const std::vector<double>& x);

double se_spim(const SeInputs& in);
double se_mimo(const SeInputs& in);
/* log2 det(I + H F F^H H^H / (sigma2 N_S)) for an arbitrary precoder. */
double se_precoded(const CMat& h, const CMat& f, double sigma2, int n_s);
double se_fd(const FdBeamformer& fd, double sigma2, int n_s);
double theorem1_rhs(const FdBeamformer& fd, const std::vector<CMat>& f, int n_s);

/* gamma[u][i] = 1 + SINR of user u under pattern i. */
double se_spim_mu(const std::vector<std::vector<double>>& gamma);

/* (1/U)|c_u^H H_u A b_u|^2 / (sum_{u' != u} (1/U)|c_u^H H_u A b_u'|^2 + sigma2). */
double sinr_mu(const std::vector<CMat>& h, const MultiUserBeamformers& beams, int u, double sigma2);

} // namespace spim
