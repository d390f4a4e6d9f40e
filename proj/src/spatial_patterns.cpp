// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/spatial_patterns.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spim {

namespace {

/* Advance a sorted k-subset of {0..n-1} to its lexicographic successor. */
bool next_subset(Subset& s, int n) {
    const int k = static_cast<int>(s.size());
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return false;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    return true;
}

int pattern_count(int L, int L_S) {
    const std::uint64_t c = binomial(L, L_S);
    int b = 0;
    while ((std::uint64_t{1} << (b + 1)) <= c) ++b;
    require(b < 31, "pattern book too large");
    return b;
}

PatternBook empty_book(int L, int L_S) {
    if (L_S < 1 || L_S > L) throw std::domain_error("build_pattern_book: need 1 <= L_S <= L");
    PatternBook book;
    book.L = L;
    book.L_S = L_S;
    book.bits_per_pattern = pattern_count(L, L_S);
    book.S = 1 << book.bits_per_pattern;
    return book;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return c;
}

std::optional<int> PatternBook::find(const Subset& s) const {
    auto it = std::lower_bound(patterns.begin(), patterns.end(), s);
    if (it != patterns.end() && *it == s) return static_cast<int>(it - patterns.begin());
    return std::nullopt;
}

PatternBook build_pattern_book(int L, int L_S) {
    PatternBook book = empty_book(L, L_S);
    Subset s(L_S);
    std::iota(s.begin(), s.end(), 0);
    book.patterns.reserve(book.S);
    do {
        book.patterns.push_back(s);
    } while (static_cast<int>(book.patterns.size()) < book.S && next_subset(s, L));
    return book;
}

PatternBook build_pattern_book_by_gain(int L, int L_S, const std::vector<double>& path_gain) {
    require(static_cast<int>(path_gain.size()) == L, "build_pattern_book_by_gain: one gain per path");
    PatternBook book = empty_book(L, L_S);
    std::vector<std::pair<double, Subset>> all;
    Subset s(L_S);
    std::iota(s.begin(), s.end(), 0);
    do {
        double g = 0.0;
        for (int l : s) g += path_gain[l];
        all.emplace_back(g, s);
    } while (next_subset(s, L));
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int i = 0; i < book.S; ++i) book.patterns.push_back(all[i].second);
    std::sort(book.patterns.begin(), book.patterns.end());
    return book;
}

int bits_to_pattern(const PatternBook& book, const BitString& bits) {
    require(static_cast<int>(bits.size()) == book.bits_per_pattern, "bits_to_pattern: wrong bit length");
    int i = 0;
    for (auto b : bits) {
        require(b <= 1, "bits_to_pattern: bits must be 0 or 1");
        i = (i << 1) | b;
    }
    return i;
}

BitString pattern_to_bits(const PatternBook& book, int i) {
    require(i >= 0 && i < book.S, "pattern_to_bits: index out of range");
    BitString bits(book.bits_per_pattern);
    for (int k = book.bits_per_pattern - 1; k >= 0; --k) {
        bits[k] = static_cast<std::uint8_t>(i & 1);
        i >>= 1;
    }
    return bits;
}

RMat selection_matrix(const PatternBook& book, int i) {
    require(i >= 0 && i < book.S, "selection_matrix: index out of range");
    RMat e = RMat::Zero(book.L, book.L_S);
    for (int c = 0; c < book.L_S; ++c) e(book.patterns[i][c], c) = 1.0;
    return e;
}

} // namespace spim
