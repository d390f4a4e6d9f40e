// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/array_geometry.hpp"
#include "spim/ris_config.hpp"
#include "spim/types.hpp"

#include <iosfwd>
#include <vector>

namespace spim {

/* Path parameters in degrees. Uplink naming: BS arrival, RIS departure
 * (BS-RIS link), RIS arrival and user departure (RIS-user link). */
struct PathSet {
    int L = 0;
    std::vector<double> bs_angles;
    std::vector<double> ris_dep_az, ris_dep_el;
    std::vector<double> ris_arr_az, ris_arr_el;
    std::vector<double> ue_angles;
    std::vector<cplx> gains_br;
    std::vector<cplx> gains_ru;
};

enum class RisAngleModel {
    independent, // all angles i.i.d. uniform
    paired,      // RIS arrival of RIS-user path l equals RIS departure of BS-RIS path l
};

struct ChannelOptions {
    RisAngleModel ris_angles = RisAngleModel::independent;
    /* If set, |alpha_l|^2 = br_power[l] and |beta_l| = 1; phases stay uniform. */
    std::vector<double> br_power;
    double gain_mean = 1.0;
    double gain_std = 0.2;
};

struct ChannelRealization {
    CMat h_br; // M x N, downlink BS -> RIS
    CMat h_ru; // Nbar x M, downlink RIS -> user
    PathSet paths;

    CMat g_br() const { return h_br.transpose(); }
    CMat g_ru() const { return h_ru.transpose(); }
    int n() const { return static_cast<int>(h_br.cols()); }
    int m() const { return static_cast<int>(h_br.rows()); }
    int nbar() const { return static_cast<int>(h_ru.rows()); }
};

/* U users with L paths each; h_br is the sum over all U*L BS-RIS paths and
 * user u owns block u of them (paths[u].bs_angles etc.). */
struct MultiUserChannel {
    CMat h_br;
    std::vector<CMat> h_ru;
    std::vector<PathSet> paths;

    int users() const { return static_cast<int>(h_ru.size()); }
    ChannelRealization user(int u) const;
};

/* Arrays are taken from the given path angles; gains are multiplied into the sums. */
ChannelRealization channel_from_paths(const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue, const PathSet& paths);

ChannelRealization generate_channel(const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue, int L, Rng& rng,
                                    const ChannelOptions& opt = {});

MultiUserChannel generate_mu_channel(const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue, int L, int U, Rng& rng,
                                     const ChannelOptions& opt = {});

CMat cascade(const ChannelRealization& ch, const RisConfig& ris);
CMat cascade(const CMat& h_br, const CMat& h_ru, const RisConfig& ris);

/* AWGN on each matrix with per-entry variance ||X||_F^2 / (numel 10^(snr/10)).
 * A non-finite snr_h_db (+inf) returns the channel unchanged. */
ChannelRealization perturb_channel(const ChannelRealization& ch, double snr_h_db, Rng& rng);
MultiUserChannel perturb_channel(const MultiUserChannel& ch, double snr_h_db, Rng& rng);
CMat perturb_matrix(const CMat& x, double snr_h_db, Rng& rng);

void write_path_dump_header(std::ostream& os);
void write_path_dump(std::ostream& os, int trial, const PathSet& paths);

} // namespace spim
