// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The spim-ris authors

#include "spim/spim_receiver.hpp"

#include <algorithm>
#include <numeric>

namespace spim {

PatternLookup build_lookup(const UlaSpec& ue, const std::vector<double>& ue_angles_deg) {
    PatternLookup lk;
    for (double a : ue_angles_deg) lk.receive.push_back(ula_steering(ue, a).conjugate());
    return lk;
}

std::vector<double> path_strengths(const CVec& y, const PatternLookup& lookup) {
    std::vector<double> nu;
    nu.reserve(lookup.receive.size());
    for (const auto& c : lookup.receive) {
        require(c.size() == y.size(), "path_strengths: receive vector length mismatch");
        nu.push_back(std::abs(c.dot(y)) / static_cast<double>(y.size()));
    }
    return nu;
}

DetectionResult detect_pattern(const CVec& y, const PatternLookup& lookup, const PatternBook& book, int transmitted) {
    require(static_cast<int>(lookup.receive.size()) == book.L, "detect_pattern: lookup needs L receive vectors");
    const std::vector<double> nu = path_strengths(y, lookup);
    std::vector<int> order(nu.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return nu[a] > nu[b]; });

    DetectionResult res;
    res.subset.assign(order.begin(), order.begin() + book.L_S);
    std::sort(res.subset.begin(), res.subset.end());
    if (auto idx = book.find(res.subset)) {
        res.pattern_index = *idx;
        res.in_book = true;
    } else {
        int best = 0, best_overlap = -1;
        for (int i = 0; i < book.S; ++i) {
            std::vector<int> common;
            std::set_intersection(res.subset.begin(), res.subset.end(), book.patterns[i].begin(),
                                  book.patterns[i].end(), std::back_inserter(common));
            if (static_cast<int>(common.size()) > best_overlap) {
                best_overlap = static_cast<int>(common.size());
                best = i;
            }
        }
        res.pattern_index = best;
    }
    res.bits = pattern_to_bits(book, res.pattern_index);
    res.transmitted = transmitted;
    res.correct = transmitted >= 0 && transmitted == res.pattern_index;
    return res;
}

DetectionResult detect_pattern_mu(const CVec& y_u, const PatternLookup& lookup_u, const PatternBook& book,
                                  int transmitted) {
    return detect_pattern(y_u, lookup_u, book, transmitted);
}

double index_bit_error_rate(const std::vector<DetectionResult>& results, const PatternBook& book) {
    require(!results.empty(), "index_bit_error_rate: empty input");
    if (book.bits_per_pattern == 0) return 0.0;
    long errors = 0;
    for (const auto& r : results) {
        require(r.transmitted >= 0 && r.transmitted < book.S, "index_bit_error_rate: result without transmitted index");
        const BitString tx = pattern_to_bits(book, r.transmitted);
        for (int k = 0; k < book.bits_per_pattern; ++k) errors += tx[k] != r.bits[k];
    }
    return static_cast<double>(errors) / (static_cast<double>(results.size()) * book.bits_per_pattern);
}

} // namespace spim
