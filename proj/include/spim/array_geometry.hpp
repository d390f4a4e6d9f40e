// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/types.hpp"

#include <vector>

namespace spim {

struct UlaSpec {
    int num_elements = 1;
    double spacing_over_wavelength = 0.5;

    UlaSpec() = default;
    explicit UlaSpec(int n, double d = 0.5);
};

enum class UpaPhaseRule {
    /* 2pi d/lambda [(m1-1) cos(phi) sin(theta) + (m2-1) sin(phi)] */
    standard,
    /* 2pi d/lambda [(m1-1) sin(phi) sin(theta) + (m2-1) cos(phi)] */
    elevation_from_zenith,
};

/* Element m = (m2-1)*cols + (m1-1): m1 runs along y (cols) and is fastest. */
struct UpaSpec {
    int rows = 1; // M_z
    int cols = 1; // M_y
    double spacing_over_wavelength = 0.5;
    UpaPhaseRule rule = UpaPhaseRule::standard;

    UpaSpec() = default;
    UpaSpec(int m_z, int m_y, double d = 0.5, UpaPhaseRule r = UpaPhaseRule::standard);
    int size() const { return rows * cols; }
};

struct DirectionGrid {
    std::vector<double> angles; // degrees, strictly increasing

    DirectionGrid() = default;
    explicit DirectionGrid(std::vector<double> a);
    int size() const { return static_cast<int>(angles.size()); }

    /* P points uniformly spaced in sin(theta), cell midpoints of [-1, 1]. */
    static DirectionGrid uniform_sine(int p);
};

CVec ula_steering(const UlaSpec& spec, double angle_deg);
CVec upa_steering(const UpaSpec& spec, double azimuth_deg, double elevation_deg);
CMat build_bs_dictionary(const UlaSpec& spec, const DirectionGrid& grid);

} // namespace spim
