// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/array_geometry.hpp"
#include "spim/spatial_patterns.hpp"
#include "spim/types.hpp"

#include <vector>

namespace spim {

struct PatternLookup {
    std::vector<CVec> receive; // one receive vector per path, length Nbar
};

struct DetectionResult {
    Subset subset;          // top-L_S paths by strength
    int pattern_index = -1; // book index actually decided
    bool in_book = false;   // subset itself is a book pattern
    BitString bits;
    int transmitted = -1;
    bool correct = false;
};

/* Conjugate user steering vectors at the given path angles. */
PatternLookup build_lookup(const UlaSpec& ue, const std::vector<double>& ue_angles_deg);

std::vector<double> path_strengths(const CVec& y, const PatternLookup& lookup);

DetectionResult detect_pattern(const CVec& y, const PatternLookup& lookup, const PatternBook& book,
                               int transmitted = -1);

/* Per-user detection; identical rule to the single-user case. */
DetectionResult detect_pattern_mu(const CVec& y_u, const PatternLookup& lookup_u, const PatternBook& book,
                                  int transmitted = -1);

double index_bit_error_rate(const std::vector<DetectionResult>& results, const PatternBook& book);

} // namespace spim
