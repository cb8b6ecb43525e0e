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
#include <variant>
#include <vector>

#include "polyrenorm/core.hpp"
#include "polyrenorm/hereditary.hpp"
#include "polyrenorm/luxemburg.hpp"
#include "polyrenorm/nakano.hpp"
#include "polyrenorm/orlicz.hpp"

namespace polyrenorm {

enum class SpaceKind { kNakano, kOrlicz, kHk };

enum class PieceMode {
    kSupportCard,  // sup over projections onto supports of cardinality <= n
    kSchauder,     // head projection P_n
};

struct PieceSupResult {
    double value = 0.0;
    Functional witness;  // dual-ball functional attaining the sup, tagged with n
};

/*!
 * A concrete sequence space at finite truncation.  Wraps one of the three
 * space models and exposes the operations the renorming engines consume:
 * the norm, the modular (where one exists), norming functionals, and the
 * cumulative piece suprema used to build boundary systems.
 *
 * All vector arguments must be supported inside {1..truncation_dim}.
 */
class Space {
  public:
    static constexpr int kSupportCap = 20;

    Space(NakanoDescriptor desc, int truncation_dim, ToleranceConfig tol = {})
        : payload_(std::move(desc)), dim_(truncation_dim), tol_(tol) {
        tol_.validate();
        if (dim_ < 1) throw Error("truncation_dim must be >= 1");
        const auto& d = std::get<NakanoDescriptor>(payload_);
        d.validate();
        for (int k = 1; k <= dim_; ++k)
            if (!d.covers(k))
                throw Error("nakano: families do not cover the coordinate window");
    }

    Space(OrliczDescriptor desc, int truncation_dim, ToleranceConfig tol = {})
        : payload_(std::move(desc)), dim_(truncation_dim), tol_(tol) {
        tol_.validate();
        if (dim_ < 1) throw Error("truncation_dim must be >= 1");
        std::get<OrliczDescriptor>(payload_).validate();
    }

    Space(HereditaryFamily family, ToleranceConfig tol = {})
        : payload_(std::move(family)),
          dim_(std::get<HereditaryFamily>(payload_).window()),
          tol_(tol) {
        tol_.validate();
    }

    SpaceKind kind() const {
        if (std::holds_alternative<NakanoDescriptor>(payload_)) return SpaceKind::kNakano;
        if (std::holds_alternative<OrliczDescriptor>(payload_)) return SpaceKind::kOrlicz;
        return SpaceKind::kHk;
    }

    int truncation_dim() const { return dim_; }
    const ToleranceConfig& tol() const { return tol_; }

    const NakanoDescriptor& nakano() const { return std::get<NakanoDescriptor>(payload_); }
    const OrliczDescriptor& orlicz() const { return std::get<OrliczDescriptor>(payload_); }
    const HereditaryFamily& family() const { return std::get<HereditaryFamily>(payload_); }

    bool has_modular() const { return kind() != SpaceKind::kHk; }

    double modular(const SparseVector& x) const {
        check_window(x);
        switch (kind()) {
            case SpaceKind::kNakano:
                return nakano_modular(nakano(), x);
            case SpaceKind::kOrlicz:
                return orlicz_modular(orlicz(), x);
            case SpaceKind::kHk:
                throw Error("hereditary-family space has no modular");
        }
        return 0.0;
    }

    double norm(const SparseVector& x) const {
        check_window(x);
        switch (kind()) {
            case SpaceKind::kNakano:
                return luxemburg_norm(
                    [this](const SparseVector& y) { return nakano_modular(nakano(), y); }, x,
                    tol_);
            case SpaceKind::kOrlicz:
                return luxemburg_norm(
                    [this](const SparseVector& y) { return orlicz_modular(orlicz(), y); }, x,
                    tol_);
            case SpaceKind::kHk:
                return hk_norm(family(), x).value;
        }
        return 0.0;
    }

    /*!
     * A dual-ball functional f with f(x) = ||x||.  For the modular spaces
     * this is the normalized modular subgradient at x/||x||; for the
     * hereditary-family space it is the signed indicator of the attaining
     * member.
     */
    Functional norming_functional(const SparseVector& x) const {
        check_window(x);
        if (x.empty()) throw Error("norming functional of the zero vector is undefined");
        if (kind() == SpaceKind::kHk) {
            auto res = hk_norm(family(), x);
            Functional f;
            for (int g : res.attaining) {
                double v = x.at(g);
                f.set(g, v < 0.0 ? -1.0 : 1.0);
            }
            return f;
        }
        double nx = norm(x);
        SparseVector u = (1.0 / nx) * x;
        Functional g;
        if (kind() == SpaceKind::kNakano) {
            const auto& d = nakano();
            for (const auto& [k, v] : u.entries()) {
                double a = std::fabs(v);
                double best = -1.0;
                double best_p = 1.0;
                for (std::size_t n = 0; n < d.families.size(); ++n) {
                    if (!d.families[n].count(k)) continue;
                    double cand = std::pow(a, d.exponents[n]);
                    if (cand > best) {
                        best = cand;
                        best_p = d.exponents[n];
                    }
                }
                double deriv = best_p * std::pow(a, best_p - 1.0);
                g.set(k, (v < 0.0 ? -deriv : deriv));
            }
        } else {
            const auto& d = orlicz();
            for (const auto& [k, v] : u.entries()) {
                double deriv = d.M_derivative(std::fabs(v));
                g.set(k, (v < 0.0 ? -deriv : deriv));
            }
        }
        double scale = evaluate(g, u);
        if (!(scale > 0.0)) throw Error("norming functional: degenerate subgradient");
        return (1.0 / scale) * g;
    }

    /*!
     * Cumulative piece supremum over H_n:
     *   support_card:  max over sigma subset supp(x), card(sigma) <= n of ||P_sigma x||
     *   schauder:      ||P_n x||
     * with the norming functional of the best projection as witness.  The
     * witness lives in the dual ball because the coordinate basis is
     * monotone in all three models.
     */
    PieceSupResult piece_sup(int n, const SparseVector& x, PieceMode mode) const {
        check_window(x);
        if (n < 1) throw Error("piece_sup requires n >= 1");
        PieceSupResult res;
        if (x.empty()) return res;

        if (mode == PieceMode::kSchauder) {
            SparseVector px = head_projection(x, n);
            if (px.empty()) return res;
            res.value = norm(px);
            res.witness = restrict_to(norming_functional(px), [n](int k) { return k <= n; });
            res.witness.piece_tag = n;
            return res;
        }

        auto supp = rearrangement_map(x);
        int s = static_cast<int>(supp.size());
        if (s > kSupportCap) throw Error("support too large");
        int take = std::min(n, s);

        // The coordinate basis is 1-unconditional, so enlarging sigma can
        // only increase the projection norm; only subsets of size `take`
        // need to be enumerated.
        std::vector<int> pick(take);
        SparseVector best_proj;
        std::set<int> best_sigma;
        double best = -1.0;
        enumerate_subsets(supp, take, 0, 0, pick, [&](const std::vector<int>& sel) {
            std::set<int> sigma(sel.begin(), sel.end());
            SparseVector px = project(x, sigma);
            double v = norm(px);
            if (v > best) {
                best = v;
                best_proj = px;
                best_sigma = sigma;
            }
        });
        res.value = best;
        // Pushforward: the witness must live on sigma, or its pairing with
        // the unprojected vector would pick up coordinates outside the piece.
        res.witness = restrict_to(norming_functional(best_proj),
                                  [&best_sigma](int k) { return best_sigma.count(k) > 0; });
        res.witness.piece_tag = n;
        return res;
    }

  private:
    template <typename Pred>
    static Functional restrict_to(const Functional& f, Pred&& keep) {
        Functional out;
        for (const auto& [k, v] : f.entries())
            if (keep(k)) out.set(k, v);
        out.piece_tag = f.piece_tag;
        return out;
    }

    template <typename Fn>
    static void enumerate_subsets(const std::vector<int>& items, int take, int start, int depth,
                                  std::vector<int>& pick, Fn&& fn) {
        if (depth == take) {
            fn(pick);
            return;
        }
        for (int i = start; i <= static_cast<int>(items.size()) - (take - depth); ++i) {
            pick[depth] = items[i];
            enumerate_subsets(items, take, i + 1, depth + 1, pick, fn);
        }
    }

    void check_window(const SparseVector& x) const {
        if (x.max_coordinate() > dim_)
            throw Error("coordinate outside truncation window");
    }

    std::variant<NakanoDescriptor, OrliczDescriptor, HereditaryFamily> payload_;
    int dim_;
    ToleranceConfig tol_;
};

/// Sample-maximized lower estimate of the dual norm of f: the largest |f(x)|
/// over a set of unit vectors.  Exact when the samples include the extreme
/// points of the relevant section.
inline double measured_dual_norm(const Functional& f, const std::vector<SparseVector>& unit_samples) {
    double best = 0.0;
    for (const auto& x : unit_samples) best = std::max(best, std::fabs(evaluate(f, x)));
    return best;
}

}  // namespace polyrenorm
