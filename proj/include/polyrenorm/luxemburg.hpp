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
#include <functional>

#include "polyrenorm/core.hpp"

namespace polyrenorm {

/*!
 * Luxemburg norm of a vector under a convex modular:
 *
 *     ||x|| = inf{ lambda > 0 : Phi(x / lambda) <= 1 }.
 *
 * The map lambda -> Phi(x/lambda) is nonincreasing and continuous for the
 * modulars used here, so the infimum is located by bracket expansion followed
 * by bisection down to a relative width of tol.bisect_tol.  The upper bracket
 * endpoint is returned, so Phi(x/result) <= 1 always holds and the result
 * overshoots the exact norm by at most one bracket width.
 *
 * Throws "invalid modular" if Phi(x/lambda) is detected to increase with
 * lambda, or if bracket expansion fails to terminate.
 */
inline double luxemburg_norm(const std::function<double(const SparseVector&)>& modular,
                             const SparseVector& x,
                             const ToleranceConfig& tol = {}) {
    if (x.empty()) return 0.0;

    auto phi_at = [&](double lambda) { return modular((1.0 / lambda) * x); };

    double hi = 1.0;
    double phi_hi = phi_at(hi);
    int guard = 0;
    while (phi_hi > 1.0) {
        double next = hi * 2.0;
        double phi_next = phi_at(next);
        if (phi_next > phi_hi * (1.0 + 1e-12))
            throw Error("invalid modular: value increased with lambda");
        hi = next;
        phi_hi = phi_next;
        if (++guard > 200) throw Error("invalid modular: no upper bracket found");
    }

    double lo = hi;
    double phi_lo = phi_hi;
    guard = 0;
    while (phi_lo <= 1.0) {
        double next = lo / 2.0;
        double phi_next = phi_at(next);
        if (phi_next < phi_lo * (1.0 - 1e-12) && phi_lo > 0.0)
            throw Error("invalid modular: value decreased with shrinking lambda");
        lo = next;
        phi_lo = phi_next;
        if (++guard > 200) {
            // Phi(x/lambda) never exceeds 1: the modular is degenerate on x.
            throw Error("invalid modular: no lower bracket found");
        }
    }

    // Invariant: phi(lo) > 1 >= phi(hi).
    while ((hi - lo) / hi > tol.bisect_tol) {
        double mid = 0.5 * (lo + hi);
        if (phi_at(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/*!
 * Scalar inverse of a nondecreasing function by bracketing bisection.
 * Used for M^{-1}(y) of Orlicz functions.  Throws when y lies outside the
 * reachable range.
 */
inline double inverse_monotone(const std::function<double(double)>& f, double y,
                               double tol_rel = 1e-13) {
    if (y <= 0) throw Error("inverse_monotone requires a positive target");
    double hi = 1.0;
    int guard = 0;
    while (f(hi) < y) {
        hi *= 2.0;
        if (++guard > 80) throw Error("target exceeds range of function");
    }
    double lo = 0.0;
    while ((hi - lo) > tol_rel * hi) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace polyrenorm
