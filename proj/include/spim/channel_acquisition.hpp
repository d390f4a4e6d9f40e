// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/array_geometry.hpp"
#include "spim/channel_model.hpp"
#include "spim/ris_config.hpp"
#include "spim/types.hpp"

#include <vector>

namespace spim {

struct PilotPlan {
    std::vector<RisConfig> ris; // one per slot
    CMat a_train;               // Nbar x N_RF, unit-modulus entries / sqrt(Nbar)
    CMat b_train;               // N_RF x N_S
    CMat symbols;               // N_S x T

    int slots() const { return static_cast<int>(ris.size()); }
    CMat transmitted() const { return a_train * b_train * symbols; } // Nbar x T
};

struct RecoveryResult {
    std::vector<int> support;   // selection order
    std::vector<double> angles; // grid angles at support (empty without a grid)
    CMat selected;              // dictionary columns at support
    double residual_norm = 0.0;
    std::vector<double> residual_trace;
};

/* T = 8L slots by default (slots <= 0). */
PilotPlan default_pilot_plan(int L, int m, int nbar, int n_rf, int n_s, int delta_bits, Rng& rng, int slots = 0);

CMat simulate_pilots(const ChannelRealization& ch, const PilotPlan& plan, double noise_var, Rng& rng);

/* Sum over users of their pilots through the shared H_BR; RIS slots from plans[0]. */
CMat simulate_pilots_mu(const MultiUserChannel& ch, const std::vector<PilotPlan>& plans, double noise_var, Rng& rng);

RecoveryResult omp(const CMat& r, const CMat& d, int L);
RecoveryResult omp(const CMat& r, const CMat& d, const DirectionGrid& grid, int L);

RecoveryResult cosamp(const CMat& r, const CMat& d, int L, int max_iter = 10);
RecoveryResult cosamp(const CMat& r, const CMat& d, const DirectionGrid& grid, int L, int max_iter = 10);

/* Least-squares residual R - A (A^+ R). */
CMat ls_residual(const CMat& a, const CMat& r);

} // namespace spim
