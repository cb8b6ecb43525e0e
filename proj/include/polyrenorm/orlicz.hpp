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
#include <string>
#include <vector>

#include "polyrenorm/core.hpp"
#include "polyrenorm/luxemburg.hpp"

namespace polyrenorm {

enum class OrliczKind {
    kPower,       // M(t) = |t|^p
    kExpPatched,  // M(t) = e^{-1/t} on (0, 1/2], affine continuation beyond
};

/// A named convex Orlicz function together with the ratio constant K > 1.
struct OrliczDescriptor {
    OrliczKind kind = OrliczKind::kPower;
    double p = 2.0;  // only for kPower
    double K = 2.0;

    static constexpr double kPatchPoint = 0.5;

    double M(double t) const {
        t = std::fabs(t);
        if (t == 0.0) return 0.0;
        switch (kind) {
            case OrliczKind::kPower:
                return std::pow(t, p);
            case OrliczKind::kExpPatched: {
                if (t <= kPatchPoint) return std::exp(-1.0 / t);
                // Value e^{-2} and slope 4 e^{-2} matched at the patch point.
                double v0 = std::exp(-1.0 / kPatchPoint);
                double s0 = v0 / (kPatchPoint * kPatchPoint);
                return v0 + s0 * (t - kPatchPoint);
            }
        }
        return 0.0;
    }

    double M_derivative(double t) const {
        t = std::fabs(t);
        switch (kind) {
            case OrliczKind::kPower:
                if (t == 0.0) return p == 1.0 ? 1.0 : 0.0;
                return p * std::pow(t, p - 1.0);
            case OrliczKind::kExpPatched: {
                if (t == 0.0) return 0.0;
                if (t <= kPatchPoint) return std::exp(-1.0 / t) / (t * t);
                double v0 = std::exp(-1.0 / kPatchPoint);
                return v0 / (kPatchPoint * kPatchPoint);
            }
        }
        return 0.0;
    }

    double M_inverse(double y) const {
        return inverse_monotone([this](double t) { return M(t); }, y);
    }

    /// Grid validation of the Orlicz axioms: M(0)=0, nondecreasing, convex,
    /// and non-degenerate (M(t) > 0 for t > 0).
    void validate() const {
        if (!(K > 1.0)) throw Error("orlicz: K must be > 1");
        if (kind == OrliczKind::kPower && p < 1.0)
            throw Error("orlicz: power exponent must be >= 1");
        const int grid = 64;
        const double t_max = 4.0;
        double prev = 0.0;
        for (int i = 1; i <= grid; ++i) {
            double t = t_max * i / grid;
            double v = M(t);
            if (v <= 0.0) throw Error("degenerate Orlicz function");
            if (v + 1e-15 < prev) throw Error("orlicz: M must be nondecreasing");
            prev = v;
        }
        for (int i = 1; i + 1 <= grid; ++i) {
            double a = t_max * i / grid, b = t_max * (i + 1) / grid;
            double mid = M(0.5 * (a + b));
            if (mid > 0.5 * (M(a) + M(b)) + 1e-12)
                throw Error("orlicz: M must be convex");
        }
    }
};

/// Modular of the Orlicz sequence space: sum over the support of M(x_k).
inline double orlicz_modular(const OrliczDescriptor& desc, const SparseVector& x) {
    double total = 0.0;
    for (const auto& [k, v] : x.entries()) total += desc.M(v);
    return total;
}

struct OrliczLimitResult {
    bool passes = false;
    double min_ratio = 0.0;          // ratio at the smallest grid point
    std::vector<double> ratios;      // along the grid, largest t first
};

/*!
 * Probes lim_{t->0} M(Kt)/M(t) = +infinity along a decreasing grid in
 * (0, 1/2].  Passes when the ratio increases toward 0 and exceeds the
 * threshold at the smallest grid point.  A power function has constant
 * ratio K^p and fails.
 */
inline OrliczLimitResult orlicz_limit_check(const OrliczDescriptor& desc,
                                            const std::vector<double>& t_grid,
                                            double threshold = 1e3) {
    if (t_grid.empty()) throw Error("orlicz_limit_check: empty grid");
    OrliczLimitResult res;
    bool increasing = true;
    double prev = -1.0;
    double prev_t = 1.0;
    for (double t : t_grid) {
        if (!(t > 0.0) || t > 0.5) throw Error("orlicz_limit_check: grid points must lie in (0, 1/2]");
        if (t >= prev_t) throw Error("orlicz_limit_check: grid must be strictly decreasing");
        prev_t = t;
        double mt = desc.M(t);
        if (mt == 0.0) throw Error("degenerate Orlicz function");
        double ratio = desc.M(desc.K * t) / mt;
        if (prev >= 0.0 && ratio < prev * (1.0 + 1e-12)) increasing = false;
        prev = ratio;
        res.ratios.push_back(ratio);
    }
    res.min_ratio = res.ratios.back();
    res.passes = increasing && res.min_ratio > threshold;
    return res;
}

struct OrliczDnResult {
    double t_max = 0.0;  // M^{-1}(1/n)
    double d_n = 0.0;    // grid minimum of M(Kt)/M(t) on (0, t_max]
    double b_n = 0.0;    // derived piece bound, b_n < (d_n - 1)/d_n
};

/*!
 * d_n = inf{ M(Kt)/M(t) : 0 < |t| <= M^{-1}(1/n) }, approximated by grid
 * minimization.  Grid points where M underflows to zero are skipped; the
 * ratio diverges there and cannot attain the minimum.  The derived b_n is
 * (1 - 1/d_n)(1 - 2^{-n-1}), strictly below (d_n - 1)/d_n and tending to 1
 * when d_n tends to infinity.
 */
inline OrliczDnResult orlicz_dn(const OrliczDescriptor& desc, int n, int grid_size = 10000) {
    if (n < 1) throw Error("orlicz_dn requires n >= 1");
    if (grid_size < 2) throw Error("orlicz_dn requires grid_size >= 2");
    OrliczDnResult res;
    res.t_max = desc.M_inverse(1.0 / n);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid_size; ++i) {
        double t = res.t_max * i / grid_size;
        double mt = desc.M(t);
        if (mt == 0.0) continue;
        double ratio = desc.M(desc.K * t) / mt;
        best = std::min(best, ratio);
    }
    if (!std::isfinite(best)) throw Error("orlicz_dn: modular vanished on the whole grid");
    res.d_n = best;
    if (res.d_n <= 1.0) throw Error("orlicz_dn: ratio bound d_n must exceed 1");
    // The shrink factor is floored so b_n stays numerically strictly below
    // (d_n - 1)/d_n even when 2^{-n-1} vanishes in double precision.
    double shrink = std::max(std::ldexp(1.0, -(n + 1)), 1e-12);
    res.b_n = (1.0 - 1.0 / res.d_n) * (1.0 - shrink);
    return res;
}

}  // namespace polyrenorm
