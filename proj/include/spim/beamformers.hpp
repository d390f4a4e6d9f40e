// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/array_geometry.hpp"
#include "spim/spatial_patterns.hpp"
#include "spim/types.hpp"

#include <vector>

namespace spim {

struct FdBeamformer {
    CMat f;                 // N x N_S, top right singular vectors
    RVec singular_values;   // top N_S, descending
};

struct HybridBeamformer {
    CMat a; // N x N_RF
    CMat b; // N_RF x N_S
    CMat f; // a * b
    bool degenerate = false;
};

struct BeamformerSet {
    CMat a_c; // N x L
    std::vector<HybridBeamformer> patterns;

    std::vector<CMat> precoders() const;
};

struct MultiUserBeamformers {
    CMat a;                 // N x U, one selected path per user
    std::vector<CVec> b;    // per user, length U
    std::vector<CVec> c;    // per user combiner, length Nbar
    bool regularized = false;
};

enum class MuPrecoder { zero_forcing, regularized_zf };

FdBeamformer fd_beamformer(const CMat& h, int n_s);

CMat build_steering_bank(const std::vector<double>& angles_deg, const UlaSpec& bs);

/* Downlink counterpart of build_steering_bank. With G = H^T the downlink
 * response of an uplink direction is the conjugate steering vector. */
CMat transmit_steering_bank(const std::vector<double>& angles_deg, const UlaSpec& bs);

/* Moore-Penrose inverse via SVD, singular values below tol * max dropped. */
CMat pinv(const CMat& a, double tol = 1e-10, bool* truncated = nullptr);

HybridBeamformer hybrid_from_columns(const CMat& a, const FdBeamformer& fd);
HybridBeamformer hybrid_beamformer(const CMat& a_c, const PatternBook& book, int i, const FdBeamformer& fd);
BeamformerSet build_beamformer_set(const CMat& a_c, const PatternBook& book, const FdBeamformer& fd);

/* Indices of the k bank columns with the largest ||h a_l||, ascending. */
Subset strongest_paths(const CMat& a_c, const CMat& h, int k);

/* Conventional hybrid with the N_RF strongest bank columns. */
HybridBeamformer conventional_hybrid(const CMat& a_c, const CMat& h, const FdBeamformer& fd, int n_rf);

/* Combiner of user u for pattern i: conjugate user steering vector of the selected path. */
std::vector<CVec> mu_combiners(const UlaSpec& ue, const std::vector<std::vector<double>>& ue_angles,
                               const PatternBook& book, int i);

/* h[u]: cascaded channel of user u; a_c[u]: that user's N x L bank. L_S = 1. */
MultiUserBeamformers mu_beamformers(const std::vector<CMat>& h, const std::vector<CMat>& a_c, const PatternBook& book,
                                    int i, const std::vector<CVec>& combiners, int n_s,
                                    MuPrecoder kind = MuPrecoder::zero_forcing, double reg = 0.0);

/* Same with an explicit analog matrix (column u serves user u). */
MultiUserBeamformers mu_beamformers(const std::vector<CMat>& h, const CMat& a, const std::vector<CVec>& combiners,
                                    int n_s, MuPrecoder kind = MuPrecoder::zero_forcing, double reg = 0.0);

} // namespace spim
