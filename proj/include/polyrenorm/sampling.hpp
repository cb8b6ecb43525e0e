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

#include <cstdint>
#include <random>
#include <vector>

#include "polyrenorm/core.hpp"
#include "polyrenorm/polytope.hpp"
#include "polyrenorm/space.hpp"

namespace polyrenorm {

/// Seeded generator with platform-independent derived values.  Standard
/// distributions are implementation-defined, so unit doubles are built
/// directly from the engine output.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::mt19937_64 engine_;
};

/*!
 * Unit-sphere samples of a space: deterministic corner cases first (basis
 * vectors and small signed combinations, which hit the extreme structure of
 * the piece systems), then seeded random sparse directions normalized by the
 * space norm.  Coordinates stay clear of zero so supports are stable.
 */
inline std::vector<SparseVector> sphere_samples(const Space& space, int count, std::uint64_t seed,
                                                int window = 0) {
    if (count < 1) throw Error("sample count must be >= 1");
    if (window <= 0) window = space.truncation_dim();
    window = std::min(window, space.truncation_dim());

    std::vector<SparseVector> raw;
    for (int i = 1; i <= window; ++i) raw.push_back(SparseVector::unit(i));
    for (int i = 1; i <= window && static_cast<int>(raw.size()) < count; ++i) {
        for (int j = i + 1; j <= window; ++j) {
            raw.push_back(SparseVector::unit(i) + SparseVector::unit(j));
            raw.push_back(SparseVector::unit(i) - SparseVector::unit(j));
        }
    }
    {
        SparseVector ones, alt;
        for (int i = 1; i <= window; ++i) {
            ones.set(i, 1.0);
            alt.set(i, i % 2 == 0 ? -1.0 : 1.0);
        }
        raw.push_back(ones);
        raw.push_back(alt);
    }
    if (static_cast<int>(raw.size()) > count) raw.resize(count);

    Rng rng(seed);
    while (static_cast<int>(raw.size()) < count) {
        int supp = rng.uniform_int(1, std::min(window, 6));
        SparseVector x;
        for (int k = 0; k < supp; ++k) {
            int idx = rng.uniform_int(1, window);
            double mag = rng.uniform(0.05, 1.0);
            double sgn = rng.unit() < 0.5 ? -1.0 : 1.0;
            x.set(idx, sgn * mag);
        }
        if (x.empty()) continue;
        raw.push_back(x);
    }

    std::vector<SparseVector> out;
    out.reserve(raw.size());
    for (const auto& x : raw) {
        double n = space.norm(x);
        if (!(n > 0.0)) continue;
        out.push_back((1.0 / n) * x);
    }
    return out;
}

/// Section-coordinate sample directions: sign-pattern corners plus seeded
/// random directions on [-1,1]^dim.
inline std::vector<Coeffs> section_directions(int dim, int count, std::uint64_t seed) {
    std::vector<Coeffs> dirs;
    for (int i = 0; i < dim; ++i) {
        Coeffs e(dim, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
        e[i] = -1.0;
        dirs.push_back(e);
    }
    for (int mask = 0; mask < (1 << dim); ++mask) {
        Coeffs v(dim);
        for (int i = 0; i < dim; ++i) v[i] = (mask >> i) & 1 ? -1.0 : 1.0;
        dirs.push_back(v);
    }
    Rng rng(seed);
    while (static_cast<int>(dirs.size()) < count) {
        Coeffs v(dim);
        double maxabs = 0.0;
        for (int i = 0; i < dim; ++i) {
            v[i] = rng.uniform(-1.0, 1.0);
            maxabs = std::max(maxabs, std::fabs(v[i]));
        }
        if (maxabs < 0.05) continue;
        dirs.push_back(v);
    }
    return dirs;
}

}  // namespace polyrenorm
