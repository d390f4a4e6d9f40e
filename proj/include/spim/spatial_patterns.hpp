// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#pragma once

#include "spim/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spim {

using Subset = std::vector<int>;            // sorted, 0-based path indices
using BitString = std::vector<std::uint8_t>; // MSB first, entries 0/1

enum class PatternOrder { lexicographic, top_gain };

struct PatternBook {
    int L = 0;
    int L_S = 0;
    int S = 0;
    int bits_per_pattern = 0;
    std::vector<Subset> patterns;

    std::optional<int> find(const Subset& s) const;
};

std::uint64_t binomial(int n, int k);

/* First S subsets of {0..L-1} of size L_S in lexicographic order. */
PatternBook build_pattern_book(int L, int L_S);

/* The S subsets with the largest total path gain, kept in lexicographic order. */
PatternBook build_pattern_book_by_gain(int L, int L_S, const std::vector<double>& path_gain);

int bits_to_pattern(const PatternBook& book, const BitString& bits);
BitString pattern_to_bits(const PatternBook& book, int i);

RMat selection_matrix(const PatternBook& book, int i);

} // namespace spim
