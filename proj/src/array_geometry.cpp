// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/array_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace spim {

namespace {

void check_angle(double deg, const char* what) {
    if (!(deg >= -90.0 && deg <= 90.0))
        throw std::domain_error(std::string(what) + " angle outside [-90, 90] degrees: " + std::to_string(deg));
}

} // namespace

UlaSpec::UlaSpec(int n, double d) : num_elements(n), spacing_over_wavelength(d) {
    require(n >= 1, "UlaSpec: num_elements must be >= 1");
    require(d > 0.0, "UlaSpec: spacing must be positive");
}

UpaSpec::UpaSpec(int m_z, int m_y, double d, UpaPhaseRule r)
    : rows(m_z), cols(m_y), spacing_over_wavelength(d), rule(r) {
    require(m_z >= 1 && m_y >= 1, "UpaSpec: rows and cols must be >= 1");
    require(d > 0.0, "UpaSpec: spacing must be positive");
}

DirectionGrid::DirectionGrid(std::vector<double> a) : angles(std::move(a)) {
    require(!angles.empty(), "DirectionGrid: empty grid");
    for (std::size_t p = 0; p < angles.size(); ++p) {
        check_angle(angles[p], "DirectionGrid");
        if (p > 0) require(angles[p] > angles[p - 1], "DirectionGrid: angles must be strictly increasing");
    }
}

DirectionGrid DirectionGrid::uniform_sine(int p) {
    require(p >= 1, "DirectionGrid::uniform_sine: p must be >= 1");
    std::vector<double> a(p);
    for (int k = 0; k < p; ++k) {
        const double s = -1.0 + (2.0 * k + 1.0) / p;
        a[k] = std::asin(s) * 180.0 / pi;
    }
    return DirectionGrid(std::move(a));
}

CVec ula_steering(const UlaSpec& spec, double angle_deg) {
    check_angle(angle_deg, "ula_steering");
    const int n = spec.num_elements;
    const double k = 2.0 * pi * spec.spacing_over_wavelength * std::sin(deg2rad(angle_deg));
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVec a(n);
    for (int i = 0; i < n; ++i) a[i] = std::polar(amp, k * i);
    return a;
}

CVec upa_steering(const UpaSpec& spec, double azimuth_deg, double elevation_deg) {
    check_angle(azimuth_deg, "upa_steering azimuth");
    check_angle(elevation_deg, "upa_steering elevation");
    const double th = deg2rad(azimuth_deg);
    const double ph = deg2rad(elevation_deg);
    double ky = 0.0, kz = 0.0;
    if (spec.rule == UpaPhaseRule::standard) {
        ky = std::cos(ph) * std::sin(th);
        kz = std::sin(ph);
    } else {
        ky = std::sin(ph) * std::sin(th);
        kz = std::cos(ph);
    }
    const double c = 2.0 * pi * spec.spacing_over_wavelength;
    const int m = spec.size();
    const double amp = 1.0 / std::sqrt(static_cast<double>(m));
    CVec a(m);
    for (int m2 = 0; m2 < spec.rows; ++m2)
        for (int m1 = 0; m1 < spec.cols; ++m1)
            a[m2 * spec.cols + m1] = std::polar(amp, c * (m1 * ky + m2 * kz));
    return a;
}

CMat build_bs_dictionary(const UlaSpec& spec, const DirectionGrid& grid) {
    CMat d(spec.num_elements, grid.size());
    for (int p = 0; p < grid.size(); ++p) d.col(p) = ula_steering(spec, grid.angles[p]);
    return d;
}

} // namespace spim
