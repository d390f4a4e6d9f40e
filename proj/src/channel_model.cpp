// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace spim {

namespace {

cplx draw_gain(Rng& rng, const ChannelOptions& opt) {
    std::normal_distribution<double> mag_dist(opt.gain_mean, opt.gain_std);
    const double mag = std::max(0.0, mag_dist(rng));
    const double ph = uniform(rng, 0.0, 2.0 * pi);
    return std::polar(mag, ph);
}

cplx draw_phase(Rng& rng, double mag) { return std::polar(mag, uniform(rng, 0.0, 2.0 * pi)); }

void append_paths(PathSet& p, int L, Rng& rng, const ChannelOptions& opt) {
    require(opt.br_power.empty() || static_cast<int>(opt.br_power.size()) == L,
            "ChannelOptions: br_power needs one entry per path");
    for (int l = 0; l < L; ++l) {
        p.bs_angles.push_back(uniform(rng, -90.0, 90.0));
        p.ris_dep_az.push_back(uniform(rng, -90.0, 90.0));
        p.ris_dep_el.push_back(uniform(rng, -90.0, 90.0));
        if (opt.ris_angles == RisAngleModel::independent) {
            p.ris_arr_az.push_back(uniform(rng, -90.0, 90.0));
            p.ris_arr_el.push_back(uniform(rng, -90.0, 90.0));
        } else {
            p.ris_arr_az.push_back(p.ris_dep_az.back());
            p.ris_arr_el.push_back(p.ris_dep_el.back());
        }
        p.ue_angles.push_back(uniform(rng, -90.0, 90.0));
        if (opt.br_power.empty()) {
            p.gains_br.push_back(draw_gain(rng, opt));
            p.gains_ru.push_back(draw_gain(rng, opt));
        } else {
            p.gains_br.push_back(draw_phase(rng, std::sqrt(std::max(0.0, opt.br_power[l]))));
            p.gains_ru.push_back(draw_phase(rng, 1.0));
        }
    }
    p.L += L;
}

/* Downlink H_BR block of the given paths, unnormalized (sum of outer products). */
CMat br_sum(const UlaSpec& bs, const UpaSpec& ris, const PathSet& p) {
    CMat h = CMat::Zero(ris.size(), bs.num_elements);
    for (int l = 0; l < p.L; ++l) {
        const CVec a_bs = ula_steering(bs, p.bs_angles[l]);
        const CVec a_ris = upa_steering(ris, p.ris_dep_az[l], p.ris_dep_el[l]);
        h.noalias() += p.gains_br[l] * a_ris.conjugate() * a_bs.transpose();
    }
    return h;
}

CMat ru_sum(const UpaSpec& ris, const UlaSpec& ue, const PathSet& p) {
    CMat h = CMat::Zero(ue.num_elements, ris.size());
    for (int l = 0; l < p.L; ++l) {
        const CVec a_ris = upa_steering(ris, p.ris_arr_az[l], p.ris_arr_el[l]);
        const CVec a_ue = ula_steering(ue, p.ue_angles[l]);
        h.noalias() += p.gains_ru[l] * a_ue.conjugate() * a_ris.transpose();
    }
    return h;
}

} // namespace

ChannelRealization MultiUserChannel::user(int u) const {
    require(u >= 0 && u < users(), "MultiUserChannel::user: index out of range");
    return {h_br, h_ru[u], paths[u]};
}

ChannelRealization channel_from_paths(const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue, const PathSet& paths) {
    require(paths.L >= 1, "channel_from_paths: need at least one path");
    const double n = bs.num_elements, m = ris.size(), nb = ue.num_elements;
    ChannelRealization ch;
    ch.h_br = std::sqrt(n * m / paths.L) * br_sum(bs, ris, paths);
    ch.h_ru = std::sqrt(m * nb / paths.L) * ru_sum(ris, ue, paths);
    ch.paths = paths;
    return ch;
}

ChannelRealization generate_channel(const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue, int L, Rng& rng,
                                    const ChannelOptions& opt) {
    require(L >= 1, "generate_channel: L must be >= 1");
    PathSet p;
    append_paths(p, L, rng, opt);
    return channel_from_paths(bs, ris, ue, p);
}

MultiUserChannel generate_mu_channel(const UlaSpec& bs, const UpaSpec& ris, const UlaSpec& ue, int L, int U, Rng& rng,
                                     const ChannelOptions& opt) {
    require(L >= 1 && U >= 1, "generate_mu_channel: L and U must be >= 1");
    const double n = bs.num_elements, m = ris.size(), nb = ue.num_elements;
    MultiUserChannel ch;
    ch.h_br = CMat::Zero(ris.size(), bs.num_elements);
    for (int u = 0; u < U; ++u) {
        PathSet p;
        append_paths(p, L, rng, opt);
        ch.h_br += br_sum(bs, ris, p);
        ch.h_ru.push_back(std::sqrt(m * nb / L) * ru_sum(ris, ue, p));
        ch.paths.push_back(std::move(p));
    }
    ch.h_br *= std::sqrt(n * m / (static_cast<double>(U) * L));
    return ch;
}

CMat cascade(const CMat& h_br, const CMat& h_ru, const RisConfig& ris) {
    require(ris.size() == h_br.rows() && ris.size() == h_ru.cols(), "cascade: RIS size does not match channel");
    return h_ru * ris.psi.asDiagonal() * h_br;
}

CMat cascade(const ChannelRealization& ch, const RisConfig& ris) { return cascade(ch.h_br, ch.h_ru, ris); }

CMat perturb_matrix(const CMat& x, double snr_h_db, Rng& rng) {
    if (!std::isfinite(snr_h_db) && snr_h_db > 0) return x;
    require(std::isfinite(snr_h_db), "perturb_channel: snr_h_db must be finite or +inf");
    const double var = x.squaredNorm() / (static_cast<double>(x.size()) * std::pow(10.0, snr_h_db / 10.0));
    CMat y = x;
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, j) += crandn(rng, var);
    return y;
}

ChannelRealization perturb_channel(const ChannelRealization& ch, double snr_h_db, Rng& rng) {
    ChannelRealization out = ch;
    out.h_br = perturb_matrix(ch.h_br, snr_h_db, rng);
    out.h_ru = perturb_matrix(ch.h_ru, snr_h_db, rng);
    return out;
}

MultiUserChannel perturb_channel(const MultiUserChannel& ch, double snr_h_db, Rng& rng) {
    MultiUserChannel out = ch;
    out.h_br = perturb_matrix(ch.h_br, snr_h_db, rng);
    for (auto& h : out.h_ru) h = perturb_matrix(h, snr_h_db, rng);
    return out;
}

void write_path_dump_header(std::ostream& os) {
    os << "trial,link,path,bs_or_ue_angle_deg,ris_azimuth_deg,ris_elevation_deg,gain_re,gain_im\n";
}

void write_path_dump(std::ostream& os, int trial, const PathSet& p) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    for (int l = 0; l < p.L; ++l)
        os << trial << ",br," << l << ',' << p.bs_angles[l] << ',' << p.ris_dep_az[l] << ',' << p.ris_dep_el[l] << ','
           << p.gains_br[l].real() << ',' << p.gains_br[l].imag() << '\n';
    for (int l = 0; l < p.L; ++l)
        os << trial << ",ru," << l << ',' << p.ue_angles[l] << ',' << p.ris_arr_az[l] << ',' << p.ris_arr_el[l] << ','
           << p.gains_ru[l].real() << ',' << p.gains_ru[l].imag() << '\n';
    os.precision(old);
}

} // namespace spim
