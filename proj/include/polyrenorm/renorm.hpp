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
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "polyrenorm/core.hpp"
#include "polyrenorm/space.hpp"

namespace polyrenorm {

/*!
 * Parameters of the piecewise renorming.  From the piece bounds b_n in (0,1]
 * (with a declared tail value for indices beyond the list):
 *
 *     c_n = inf{ b_m : m >= n },      a_n = (1 + 2^{-n}) / c_n.
 *
 * c is nondecreasing, a is strictly decreasing, and a_n c_n = 1 + 2^{-n} > 1.
 * Indices are 1-based throughout.
 */
struct RenormParams {
    std::vector<double> b;
    std::vector<double> c;
    std::vector<double> a;
    double tail_limit = 1.0;  // declared limit of b beyond the list

    double c_at(int n) const {
        if (n < 1) throw Error("renorm params: index must be >= 1");
        if (n <= static_cast<int>(c.size())) return c[n - 1];
        return tail_limit;
    }

    double a_at(int n) const {
        if (n < 1) throw Error("renorm params: index must be >= 1");
        if (n <= static_cast<int>(a.size())) return a[n - 1];
        return (1.0 + std::ldexp(1.0, -n)) / tail_limit;
    }
};

inline RenormParams compute_params(const std::vector<double>& b, double tail_limit = 1.0) {
    for (double v : b) {
        if (!(v > 0.0)) throw Error("b must be strictly positive");
        // Normalization slack: empirical bounds from unit samples may sit a
        // rounding error above 1.
        if (v > 1.0 + 1e-9) throw Error("b entries must lie in (0, 1]");
    }
    if (!(tail_limit > 0.0) || tail_limit > 1.0)
        throw Error("declared b tail limit must lie in (0, 1]");
    RenormParams params;
    params.b = b;
    params.tail_limit = tail_limit;
    params.c.assign(b.size(), 0.0);
    double running = tail_limit;
    for (int i = static_cast<int>(b.size()) - 1; i >= 0; --i) {
        running = std::min(running, b[i]);
        params.c[i] = running;
    }
    params.a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        params.a[i] = (1.0 + std::ldexp(1.0, -static_cast<int>(i) - 1)) / params.c[i];
    return params;
}

/// Explicit disjoint pieces G_1..G_N given as finite functional lists.
struct ExplicitPieces {
    std::vector<std::vector<Functional>> pieces;
};

/// Pieces backed by the cumulative projection suprema of a space.
struct OraclePieces {
    Space space;
    PieceMode mode = PieceMode::kSupportCard;
    int count = 0;
};

/*!
 * An increasing system of relative boundaries H_n, stored either as disjoint
 * explicit pieces G_n = H_n \ H_{n-1} (so the piece index of a functional is
 * a stored tag, not a search) or as supremum/attainment oracles over the
 * cumulative sets H_n.  Explicit pieces are validated pairwise disjoint;
 * oracle pieces are disjoint by construction.
 */
class BoundarySystem {
  public:
    static BoundarySystem explicit_pieces(std::vector<std::vector<Functional>> pieces) {
        for (std::size_t i = 0; i < pieces.size(); ++i)
            for (std::size_t j = i + 1; j < pieces.size(); ++j)
                for (const auto& f : pieces[i])
                    for (const auto& g : pieces[j])
                        if (f == g) throw Error("boundary pieces must be pairwise disjoint");
        BoundarySystem sys;
        auto& ep = sys.impl_.emplace<ExplicitPieces>();
        ep.pieces = std::move(pieces);
        for (std::size_t n = 0; n < ep.pieces.size(); ++n)
            for (auto& f : ep.pieces[n]) f.piece_tag = static_cast<int>(n) + 1;
        return sys;
    }

    static BoundarySystem support_card(Space space, int count) {
        return oracle(std::move(space), PieceMode::kSupportCard, count);
    }

    static BoundarySystem schauder(Space space, int count) {
        return oracle(std::move(space), PieceMode::kSchauder, count);
    }

    /// Extreme-functional system of a hereditary-family space: piece n holds
    /// the signed indicators of the members of cardinality n.  Equivalent to
    /// the support-cardinality oracle and explicitly enumerable.
    static BoundarySystem hk_extreme(const Space& space) {
        if (space.kind() != SpaceKind::kHk)
            throw Error("hk_extreme requires a hereditary-family space");
        const auto& fam = space.family();
        int max_card = 0;
        for (const auto& A : fam.members())
            max_card = std::max(max_card, static_cast<int>(A.size()));
        std::vector<std::vector<Functional>> pieces(max_card);
        for (const auto& A : fam.members()) {
            int c = static_cast<int>(A.size());
            if (c == 0) continue;
            std::vector<int> signs(c, 1);
            while (true) {
                pieces[c - 1].push_back(member_functional(A, signs));
                int i = 0;
                while (i < c && signs[i] < 0) signs[i++] = 1;
                if (i == c) break;
                signs[i] = -1;
            }
        }
        return explicit_pieces(std::move(pieces));
    }

    /// Coordinate singleton pieces G_n = {+-e_n*}: the classical fixture in
    /// which the piece bounds cannot converge to 1.
    static BoundarySystem coordinate_singletons(int count) {
        std::vector<std::vector<Functional>> pieces;
        for (int n = 1; n <= count; ++n)
            pieces.push_back({Functional::unit(n), -1.0 * Functional::unit(n)});
        return explicit_pieces(std::move(pieces));
    }

    int piece_count() const {
        if (const auto* ep = std::get_if<ExplicitPieces>(&impl_))
            return static_cast<int>(ep->pieces.size());
        return std::get<OraclePieces>(impl_).count;
    }

    bool enumerable() const { return std::holds_alternative<ExplicitPieces>(impl_); }

    const std::vector<Functional>& piece(int n) const {
        const auto* ep = std::get_if<ExplicitPieces>(&impl_);
        if (!ep) throw Error("piece not enumerable");
        if (n < 1 || n > static_cast<int>(ep->pieces.size()))
            throw Error("piece index out of range");
        return ep->pieces[n - 1];
    }

    /// sup over the disjoint piece G_n of |g(x)|, with the attaining functional.
    PieceSupResult piece_value(int n, const SparseVector& x) const {
        if (n < 1 || n > piece_count()) throw Error("piece index out of range");
        if (const auto* ep = std::get_if<ExplicitPieces>(&impl_)) {
            PieceSupResult res;
            for (const auto& g : ep->pieces[n - 1]) {
                double v = std::fabs(evaluate(g, x));
                if (v > res.value) {
                    res.value = v;
                    res.witness = g;
                }
            }
            res.witness.piece_tag = n;
            return res;
        }
        const auto& op = std::get<OraclePieces>(impl_);
        return op.space.piece_sup(n, x, op.mode);
    }

  private:
    static BoundarySystem oracle(Space space, PieceMode mode, int count) {
        if (count < 1) throw Error("boundary system needs at least one piece");
        BoundarySystem sys;
        sys.impl_ = OraclePieces{std::move(space), mode, count};
        return sys;
    }

    std::variant<ExplicitPieces, OraclePieces> impl_;
};

/// Checks the relative-boundary contract of a piece system on unit samples:
/// every piece witness re-attains its supremum, and witnesses stay inside
/// the dual ball as measured against the sample set.
inline std::vector<CheckItem> validate_boundary_system(const BoundarySystem& sys,
                                                       const std::vector<SparseVector>& unit_samples,
                                                       const ToleranceConfig& tol = {}) {
    double worst_attain = 0.0;
    double worst_dual = 0.0;
    for (int n = 1; n <= sys.piece_count(); ++n) {
        for (const auto& x : unit_samples) {
            auto pv = sys.piece_value(n, x);
            if (pv.value == 0.0) continue;
            worst_attain = std::max(worst_attain,
                                    std::fabs(std::fabs(evaluate(pv.witness, x)) - pv.value));
            worst_dual = std::max(worst_dual, measured_dual_norm(pv.witness, unit_samples) - 1.0);
        }
    }
    return {CheckItem{"piece_witness_attains", worst_attain <= tol.eq_tol,
                      tol.eq_tol - worst_attain},
            CheckItem{"piece_witness_dual_ball", worst_dual <= tol.eq_tol,
                      tol.eq_tol - worst_dual}};
}

/// ||x||_n = sup{ a_{n(h)} |h(x)| : h in H_n }.  Pieces are disjoint, so the
/// sup decomposes as max_{k<=n} a_k sup_{G_k} |g(x)|; for cumulative oracles
/// the same value results because a is strictly decreasing.
inline double seminorm(const BoundarySystem& sys, const RenormParams& params,
                       const SparseVector& x, int n) {
    if (n > sys.piece_count()) throw Error("seminorm index exceeds piece count");
    double best = 0.0;
    for (int k = 1; k <= n; ++k)
        best = std::max(best, params.a_at(k) * sys.piece_value(k, x).value);
    return best;
}

struct TripleNormResult {
    double value = 0.0;
    int n_x = 0;          // minimal piece index attaining the value
    Functional witness;   // rescaled attaining functional; witness(x) = value
    int term_index = 0;   // minimal N with a_N ||x|| < value
};

/*!
 * The renormed value |||x||| = sup{ a_{n(h)} |h(x)| : h in H }.
 *
 * Pieces are scanned in order while maintaining the running maximum; the
 * scan stops at the first N with a_{N+1} ||x|| below the maximum, which is
 * valid because every piece supremum is at most ||x|| (all functionals lie
 * in the dual unit ball).  If the pieces are exhausted and even the limiting
 * a cannot certify termination, the b sequence fails its convergence
 * contract and an error is raised.
 */
inline TripleNormResult triple_norm(const BoundarySystem& sys, const RenormParams& params,
                                    const SparseVector& x, const Space& base) {
    if (x.empty()) throw Error("triple norm of the zero vector is undefined");
    double nx = base.norm(x);

    TripleNormResult res;
    Functional best_witness;
    int n = 0;
    const int hard_cap = sys.piece_count() + 200;
    while (true) {
        ++n;
        if (n <= sys.piece_count()) {
            auto pv = sys.piece_value(n, x);
            double scaled = params.a_at(n) * pv.value;
            if (scaled > res.value) {
                res.value = scaled;
                res.n_x = n;
                best_witness = pv.witness;
            }
        } else if (!(res.value > nx / params.tail_limit)) {
            throw Error("b sequence does not converge to 1");
        }
        if (params.a_at(n + 1) * nx < res.value) break;
        if (n > hard_cap) throw Error("b sequence does not converge to 1");
    }

    if (res.n_x == 0) throw Error("b sequence does not converge to 1");

    double raw = evaluate(best_witness, x);
    double sign = raw < 0.0 ? -1.0 : 1.0;
    res.witness = (sign * params.a_at(res.n_x)) * best_witness;
    res.witness.piece_tag = res.n_x;

    res.term_index = 1;
    while (!(params.a_at(res.term_index) * nx < res.value)) {
        ++res.term_index;
        if (res.term_index > hard_cap + 100)
            throw Error("b sequence does not converge to 1");
    }
    return res;
}

/// The finite boundary truncation F = union of +-a_n G_n for n <= n_max,
/// every functional tagged with its piece index.
inline std::vector<Functional> boundary_enumerate(const BoundarySystem& sys,
                                                  const RenormParams& params, int n_max) {
    if (n_max > sys.piece_count()) throw Error("piece index out of range");
    std::vector<Functional> out;
    for (int n = 1; n <= n_max; ++n) {
        for (const auto& g : sys.piece(n)) {
            Functional plus = params.a_at(n) * g;
            plus.piece_tag = n;
            Functional minus = -params.a_at(n) * g;
            minus.piece_tag = n;
            out.push_back(std::move(plus));
            out.push_back(std::move(minus));
        }
    }
    return out;
}

struct GapReport {
    double margin = 0.0;     // |||x||| - sup_H |h(x)|
    double bound = 0.0;      // required lower bound for the margin
    bool pass = false;
};

/*!
 * The gap hypothesis of the gluing argument: the unscaled suprema over H
 * stay strictly below the renormed value.  With a partition label n* for
 * x/||x|| the margin is asserted against (a_{n*} c_{n*} - 1) ||x|| / a_{n*};
 * without one it must merely be positive beyond tolerance.
 */
inline GapReport star_gap_check(const BoundarySystem& sys, const RenormParams& params,
                                const SparseVector& x, const Space& base,
                                std::optional<int> partition_label = std::nullopt) {
    if (x.empty()) throw Error("gap check of the zero vector is undefined");
    auto tri = triple_norm(sys, params, x, base);
    double sup_h = 0.0;
    for (int k = 1; k <= sys.piece_count(); ++k)
        sup_h = std::max(sup_h, sys.piece_value(k, x).value);

    GapReport rep;
    rep.margin = tri.value - sup_h;
    if (partition_label) {
        int n = *partition_label;
        double nx = base.norm(x);
        rep.bound = (params.a_at(n) * params.c_at(n) - 1.0) * nx / params.a_at(n);
    } else {
        rep.bound = base.tol().eq_tol;
    }
    rep.pass = rep.margin >= rep.bound - base.tol().eq_tol && rep.margin > 0.0;
    return rep;
}

}  // namespace polyrenorm
