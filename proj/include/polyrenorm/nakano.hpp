// Copyright 2026 The Polyrenorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <set>
#include <vector>

#include "polyrenorm/core.hpp"

namespace polyrenorm {

/// Block family (A_n) with exponents (p_n), p_n >= 1 nondecreasing.
/// Family indices are 0-based.
struct NakanoDescriptor {
    std::vector<std::set<int>> families;
    std::vector<double> exponents;

    void validate() const {
        if (families.size() != exponents.size())
            throw Error("nakano: families and exponents must have equal length");
        if (families.empty()) throw Error("nakano: at least one family required");
        double prev = 1.0;
        for (double p : exponents) {
            if (p < 1.0) throw Error("nakano: exponents must be >= 1");
            if (p < prev) throw Error("nakano: exponents must be nondecreasing");
            prev = p;
        }
        for (const auto& fam : families)
            for (int k : fam)
                if (k < 1) throw Error("nakano: coordinates must be >= 1");
    }

    bool covers(int k) const {
        for (const auto& fam : families)
            if (fam.count(k)) return true;
        return false;
    }

    int max_coordinate() const {
        int m = 0;
        for (const auto& fam : families)
            if (!fam.empty()) m = std::max(m, *fam.rbegin());
        return m;
    }
};

/*!
 * The modular of the block space: the supremum over all choices of pairwise
 * disjoint B_n subset A_n of
 *
 *     sum_n sum_{k in B_n} |x_k|^{p_n}.
 *
 * Disjointness only forbids a coordinate appearing in two blocks, so the
 * choices decouple per coordinate and the supremum equals the greedy sum
 *
 *     sum_{k in supp x} max{ |x_k|^{p_n} : k in A_n }.
 *
 * The equivalence with the exhaustive supremum is exercised by the oracle
 * test battery.
 */
inline double nakano_modular(const NakanoDescriptor& desc, const SparseVector& x) {
    double total = 0.0;
    for (const auto& [k, v] : x.entries()) {
        double best = -1.0;
        double a = std::fabs(v);
        for (std::size_t n = 0; n < desc.families.size(); ++n) {
            if (!desc.families[n].count(k)) continue;
            best = std::max(best, std::pow(a, desc.exponents[n]));
        }
        if (best < 0.0)
            throw Error("uncovered coordinate: " + std::to_string(k));
        total += best;
    }
    return total;
}

}  // namespace polyrenorm
