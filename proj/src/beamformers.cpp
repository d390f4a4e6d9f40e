// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/beamformers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spim {

std::vector<CMat> BeamformerSet::precoders() const {
    std::vector<CMat> f;
    f.reserve(patterns.size());
    for (const auto& p : patterns) f.push_back(p.f);
    return f;
}

FdBeamformer fd_beamformer(const CMat& h, int n_s) {
    require(n_s >= 1 && n_s <= std::min(h.rows(), h.cols()), "fd_beamformer: need 1 <= n_s <= min(Nbar, N)");
    if (!h.allFinite()) throw NumericError("fd_beamformer: non-finite channel");
    Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    FdBeamformer fd;
    fd.f = svd.matrixV().leftCols(n_s);
    fd.singular_values = svd.singularValues().head(n_s);
    if (!fd.f.allFinite()) throw NumericError("fd_beamformer: SVD failed");
    return fd;
}

CMat build_steering_bank(const std::vector<double>& angles_deg, const UlaSpec& bs) {
    CMat a(bs.num_elements, static_cast<Eigen::Index>(angles_deg.size()));
    for (std::size_t l = 0; l < angles_deg.size(); ++l) a.col(l) = ula_steering(bs, angles_deg[l]);
    return a;
}

CMat transmit_steering_bank(const std::vector<double>& angles_deg, const UlaSpec& bs) {
    return build_steering_bank(angles_deg, bs).conjugate();
}

CMat pinv(const CMat& a, double tol, bool* truncated) {
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    const double cut = s.size() ? tol * s[0] : 0.0;
    RVec inv = RVec::Zero(s.size());
    bool cut_any = false;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s[k] > cut && s[k] > 0.0)
            inv[k] = 1.0 / s[k];
        else
            cut_any = true;
    }
    if (truncated) *truncated = cut_any;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

HybridBeamformer hybrid_from_columns(const CMat& a, const FdBeamformer& fd) {
    const int n_s = static_cast<int>(fd.f.cols());
    HybridBeamformer hb;
    hb.a = a;
    bool truncated = false;
    hb.b = pinv(a, 1e-10, &truncated) * fd.f;
    hb.degenerate = truncated;
    double p = (a * hb.b).squaredNorm();
    if (!(p > 1e-300)) {
        /* F orthogonal to span(a): fall back to equal-power streams on the first columns. */
        hb.b = CMat::Identity(a.cols(), n_s);
        hb.degenerate = true;
        p = (a * hb.b).squaredNorm();
    }
    hb.b *= std::sqrt(n_s / p);
    hb.f = a * hb.b;
    return hb;
}

HybridBeamformer hybrid_beamformer(const CMat& a_c, const PatternBook& book, int i, const FdBeamformer& fd) {
    require(a_c.cols() == book.L, "hybrid_beamformer: bank width must equal L");
    require(fd.f.cols() <= book.L_S, "hybrid_beamformer: N_S must not exceed N_RF = L_S");
    const RMat e = selection_matrix(book, i);
    return hybrid_from_columns(a_c * e.cast<cplx>(), fd);
}

BeamformerSet build_beamformer_set(const CMat& a_c, const PatternBook& book, const FdBeamformer& fd) {
    BeamformerSet set;
    set.a_c = a_c;
    set.patterns.reserve(book.S);
    for (int i = 0; i < book.S; ++i) set.patterns.push_back(hybrid_beamformer(a_c, book, i, fd));
    return set;
}

Subset strongest_paths(const CMat& a_c, const CMat& h, int k) {
    require(k >= 1 && k <= a_c.cols(), "strongest_paths: bad k");
    const RVec g = (h * a_c).colwise().norm().transpose();
    std::vector<int> idx(a_c.cols());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return g[x] > g[y]; });
    Subset s(idx.begin(), idx.begin() + k);
    std::sort(s.begin(), s.end());
    return s;
}

HybridBeamformer conventional_hybrid(const CMat& a_c, const CMat& h, const FdBeamformer& fd, int n_rf) {
    const Subset s = strongest_paths(a_c, h, n_rf);
    CMat a(a_c.rows(), n_rf);
    for (int r = 0; r < n_rf; ++r) a.col(r) = a_c.col(s[r]);
    return hybrid_from_columns(a, fd);
}

std::vector<CVec> mu_combiners(const UlaSpec& ue, const std::vector<std::vector<double>>& ue_angles,
                               const PatternBook& book, int i) {
    require(book.L_S == 1, "mu_combiners: one path per user");
    std::vector<CVec> c;
    for (const auto& ang : ue_angles) {
        require(static_cast<int>(ang.size()) == book.L, "mu_combiners: need L user angles per user");
        c.push_back(ula_steering(ue, ang[book.patterns[i][0]]).conjugate());
    }
    return c;
}

MultiUserBeamformers mu_beamformers(const std::vector<CMat>& h, const CMat& a, const std::vector<CVec>& combiners,
                                    int n_s, MuPrecoder kind, double reg) {
    const int U = static_cast<int>(h.size());
    require(U >= 1 && a.cols() == U && static_cast<int>(combiners.size()) == U,
            "mu_beamformers: need one analog column and combiner per user");
    CMat g(U, U);
    for (int u = 0; u < U; ++u) g.row(u) = combiners[u].adjoint() * h[u] * a;

    MultiUserBeamformers mb;
    mb.a = a;
    mb.c = combiners;
    const CMat ggh = g * g.adjoint();
    CMat loaded = ggh;
    if (kind == MuPrecoder::regularized_zf) {
        loaded += reg * CMat::Identity(U, U);
        mb.regularized = true;
    } else {
        Eigen::JacobiSVD<CMat> svd(g);
        const RVec& s = svd.singularValues();
        if (!(s[U - 1] > 1e-10 * s[0])) {
            const double load = 1e-8 * std::max(ggh.trace().real(), 1e-300) / U;
            loaded += load * CMat::Identity(U, U);
            mb.regularized = true;
        }
    }
    const CMat bmat = g.adjoint() * loaded.inverse();
    if (!bmat.allFinite()) throw NumericError("mu_beamformers: non-finite precoder");
    const double per_user = static_cast<double>(n_s) / U;
    for (int u = 0; u < U; ++u) {
        CVec bu = bmat.col(u);
        double p = (a * bu).squaredNorm();
        if (!(p > 1e-300)) {
            bu = CVec::Unit(U, u);
            p = a.col(u).squaredNorm();
        }
        mb.b.push_back(bu * std::sqrt(per_user / p));
    }
    return mb;
}

MultiUserBeamformers mu_beamformers(const std::vector<CMat>& h, const std::vector<CMat>& a_c, const PatternBook& book,
                                    int i, const std::vector<CVec>& combiners, int n_s, MuPrecoder kind, double reg) {
    require(book.L_S == 1, "mu_beamformers: one path per user");
    require(a_c.size() == h.size(), "mu_beamformers: one bank per user");
    const int U = static_cast<int>(h.size());
    CMat a(a_c[0].rows(), U);
    for (int u = 0; u < U; ++u) a.col(u) = a_c[u].col(book.patterns[i][0]);
    return mu_beamformers(h, a, combiners, n_s, kind, reg);
}

} // namespace spim
