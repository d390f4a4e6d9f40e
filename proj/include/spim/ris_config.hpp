// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/types.hpp"

namespace spim {

/* delta_bits == 0 means continuous phases. */
struct RisConfig {
    CVec psi;
    int delta_bits = 0;

    RisConfig() = default;
    RisConfig(CVec p, int bits) : psi(std::move(p)), delta_bits(bits) {}

    static RisConfig identity(int m, int bits = 0) { return RisConfig(CVec::Ones(m), bits); }
    static RisConfig from_phases(const RVec& phases, int bits = 0);

    int size() const { return static_cast<int>(psi.size()); }
    RVec phases() const; // wrapped to [0, 2pi)
    CMat diagonal() const { return psi.asDiagonal(); }
};

} // namespace spim
