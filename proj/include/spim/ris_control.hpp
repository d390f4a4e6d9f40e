// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/beamformers.hpp"
#include "spim/channel_model.hpp"
#include "spim/ris_config.hpp"
#include "spim/types.hpp"

#include <vector>

namespace spim {

enum class QuantizeRule { floor, round };

struct QuadraticForm {
    CMat q; // M x M Hermitian PSD
};

struct SuRisResult {
    RisConfig config;            // quantized (or continuous when delta_bits == 0)
    RisConfig continuous;        // before quantization
    std::vector<double> objective; // psi^H Q psi at start and after each sweep
};

struct MuRisBudget {
    int cd_sweeps = 20;
    int greedy_sweeps = 5;
    int randomizations = 100;
    double randomization_std = 0.5; // radians
};

struct MuRisResult {
    RisConfig config;
    bool feasible = false;
    std::vector<double> sinrs;             // per user, worst pattern
    std::vector<std::vector<double>> table; // [u][i]
};

/* z[u][v] with c_u^H H_u A b_v = psi^T z[u][v] (for one pattern). */
using ZVectors = std::vector<std::vector<CVec>>;

QuadraticForm build_q(const ChannelRealization& ch);
QuadraticForm build_q(const CMat& h_br, const CMat& h_ru);
double ris_objective(const QuadraticForm& q, const CVec& psi);

RisConfig quantize_phases(const RisConfig& in, int delta_bits, QuantizeRule rule = QuantizeRule::floor);

SuRisResult optimize_ris_su(const QuadraticForm& q, int delta_bits, const RisConfig& init, int sweeps,
                            QuantizeRule rule = QuantizeRule::floor, double tol = 0.0);

ZVectors mu_z_vectors(const CMat& h_br, const std::vector<CMat>& h_ru, const MultiUserBeamformers& beams);

/* SINR table from z-vectors, [u] for one pattern. */
std::vector<double> mu_sinrs(const ZVectors& z, const CVec& psi, double sigma2);

/* beams: one entry per pattern; the constraint SINR_u >= kappa_u is imposed for every pattern. */
MuRisResult optimize_ris_mu(const CMat& h_br, const std::vector<CMat>& h_ru,
                            const std::vector<MultiUserBeamformers>& beams, const std::vector<double>& kappa,
                            int delta_bits, double sigma2, Rng& rng, const MuRisBudget& budget = {},
                            const RisConfig* init = nullptr);

} // namespace spim
