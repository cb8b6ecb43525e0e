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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "polyrenorm/core.hpp"
#include "polyrenorm/hereditary.hpp"
#include "polyrenorm/polytope.hpp"

namespace polyrenorm {

/// Cantor pairing of (i, j); orders the disjointification of filtrations.
inline int cantor_pair(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }

/*!
 * Disjoint covering pieces L_0..L_{N-1} (0-based) with optional closure
 * annotations.  At finite truncation every finite piece is closed, so a
 * functional can only belong to additional piece closures by declaration;
 * the annotations feed the membership index I(f) and through it the psi
 * weights.
 */
class PieceDecomposition {
  public:
    explicit PieceDecomposition(std::vector<std::vector<Functional>> pieces,
                                std::vector<int> source_tags = {})
        : pieces_(std::move(pieces)), source_(std::move(source_tags)) {
        if (source_.empty()) {
            source_.resize(pieces_.size());
            for (std::size_t i = 0; i < pieces_.size(); ++i) source_[i] = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            for (std::size_t j = i + 1; j < pieces_.size(); ++j)
                for (const auto& f : pieces_[i])
                    for (const auto& g : pieces_[j])
                        if (f == g) throw Error("decomposition pieces must be disjoint");
    }

    int piece_count() const { return static_cast<int>(pieces_.size()); }
    const std::vector<std::vector<Functional>>& pieces() const { return pieces_; }
    const std::vector<int>& source_tags() const { return source_; }

    /// Declares that f lies in the closure of piece n.
    void annotate(const Functional& f, int piece_index) {
        if (piece_index < 0 || piece_index >= piece_count())
            throw Error("annotation piece index out of range");
        annotations_[f.to_text()].insert(piece_index);
    }

    /// Owning piece of f by exact entry comparison, or -1.
    int find_piece(const Functional& f) const {
        for (std::size_t n = 0; n < pieces_.size(); ++n)
            for (const auto& g : pieces_[n])
                if (g == f) return static_cast<int>(n);
        return -1;
    }

    /// I(f) = {owning piece} union annotated closure indices; n(f) = min I(f).
    std::pair<std::set<int>, int> membership_index(const Functional& f) const {
        std::set<int> I;
        int own = find_piece(f);
        if (own >= 0) I.insert(own);
        auto it = annotations_.find(f.to_text());
        if (it != annotations_.end()) I.insert(it->second.begin(), it->second.end());
        if (I.empty()) throw Error("functional outside decomposition");
        return {I, *I.begin()};
    }

  private:
    std::vector<std::vector<Functional>> pieces_;
    std::vector<int> source_;
    std::map<std::string, std::set<int>> annotations_;
};

/// Disjointifies a list of finite covering sets by sequential set difference
/// (the pairing-order flattening of the one-level filtration): piece i keeps
/// the functionals of E_i not seen in E_0..E_{i-1}.  The union is preserved
/// and pieces carry their source index.
inline PieceDecomposition disjointify(const std::vector<std::vector<Functional>>& e_list) {
    std::vector<std::vector<Functional>> pieces;
    std::vector<int> tags;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < e_list.size(); ++i) {
        std::vector<Functional> piece;
        for (const auto& f : e_list[i]) {
            auto key = f.to_text();
            if (seen.count(key)) continue;
            seen.insert(key);
            piece.push_back(f);
        }
        pieces.push_back(std::move(piece));
        tags.push_back(static_cast<int>(i));
    }
    return PieceDecomposition(std::move(pieces), std::move(tags));
}

/// The strata decomposition of a hereditary-family space: piece n holds the
/// signed indicators of the members of cardinality n+1.
inline PieceDecomposition hk_strata_decomposition(const HereditaryFamily& family) {
    std::map<int, std::vector<Functional>> by_card;
    int max_card = 0;
    for (const auto& A : family.members())
        max_card = std::max(max_card, static_cast<int>(A.size()));
    for (const auto& A : family.members()) {
        int c = static_cast<int>(A.size());
        if (c == 0) continue;
        std::vector<int> signs(c, 1);
        while (true) {
            by_card[c].push_back(member_functional(A, signs));
            int i = 0;
            while (i < c && signs[i] < 0) signs[i++] = 1;
            if (i == c) break;
            signs[i] = -1;
        }
    }
    std::vector<std::vector<Functional>> pieces(max_card);
    for (auto& [c, fs] : by_card) pieces[c - 1] = std::move(fs);
    return PieceDecomposition(std::move(pieces));
}

/// eps_n = eps * 4^{-n} / 160, exactly.
inline double epsilon_schedule(double eps, int n) {
    if (!(eps > 0.0)) throw Error("epsilon must be positive");
    if (n < 0) throw Error("epsilon schedule index must be >= 0");
    return eps * std::ldexp(1.0, -2 * n) / 160.0;
}

/// psi(f) = 1 + (eps/2) 2^{-n} (1 + (1/4) sum_{i in I} 2^{-i}), strictly
/// inside (1, 1 + eps); the attainable range is (1, 1 + (3/4) eps].
inline double psi(double eps, const std::set<int>& I, int n) {
    if (!(eps > 0.0)) throw Error("epsilon must be positive");
    if (I.empty() || *I.begin() != n) throw Error("psi requires n = min I");
    double tail = 0.0;
    for (int i : I) tail += std::ldexp(1.0, -i);
    double value = 1.0 + 0.5 * eps * std::ldexp(1.0, -n) * (1.0 + 0.25 * tail);
    return value;
}

struct NetFamily {
    std::vector<std::vector<Functional>> nets;  // Gamma_0..Gamma_{N-1}
    std::vector<std::vector<double>> psi_values;
    std::vector<double> eps_n;
};

/// Coefficient l1 distance between functionals.  Dominates the operator-norm
/// distance for every space here (the coordinate functionals all lie in the
/// dual ball), so net covering in this metric implies covering in norm.
inline double functional_distance(const Functional& f, const Functional& g) {
    double d = 0.0;
    auto fa = f.entries().begin();
    auto ga = g.entries().begin();
    while (fa != f.entries().end() || ga != g.entries().end()) {
        if (ga == g.entries().end() || (fa != f.entries().end() && fa->first < ga->first)) {
            d += std::fabs(fa->second);
            ++fa;
        } else if (fa == f.entries().end() || ga->first < fa->first) {
            d += std::fabs(ga->second);
            ++ga;
        } else {
            d += std::fabs(fa->second - ga->second);
            ++fa;
            ++ga;
        }
    }
    return d;
}

/*!
 * Builds the perturbation nets.  Each piece is bucketed into half-open
 * psi-cells of width eps_n anchored at 1, then a maximal eps_n-separated
 * subset is extracted greedily per cell.  The greedy order is the
 * serialized form of the functionals, which pins down the Zorn maximality
 * order-dependence deterministically.  Every piece member then has a net
 * point within eps_n in both psi value and norm distance.
 */
inline NetFamily build_nets(const PieceDecomposition& decomp, double eps) {
    NetFamily fam;
    for (int n = 0; n < decomp.piece_count(); ++n) {
        double eps_n = epsilon_schedule(eps, n);
        std::vector<Functional> sorted = decomp.pieces()[n];
        std::sort(sorted.begin(), sorted.end(),
                  [](const Functional& a, const Functional& b) { return a.to_text() < b.to_text(); });

        std::map<long long, std::vector<std::size_t>> cells;  // cell -> indices into kept
        std::vector<Functional> kept;
        std::vector<double> kept_psi;
        for (const auto& f : sorted) {
            auto [I, nf] = decomp.membership_index(f);
            double pf = psi(eps, I, nf);
            long long cell = static_cast<long long>(std::floor((pf - 1.0) / eps_n));
            bool separated = true;
            for (std::size_t idx : cells[cell]) {
                if (functional_distance(f, kept[idx]) < eps_n) {
                    separated = false;
                    break;
                }
            }
            if (separated) {
                cells[cell].push_back(kept.size());
                kept.push_back(f);
                kept_psi.push_back(pf);
            }
        }
        fam.nets.push_back(std::move(kept));
        fam.psi_values.push_back(std::move(kept_psi));
        fam.eps_n.push_back(eps_n);
    }
    return fam;
}

struct StarNormResult {
    double value = 0.0;
    Functional witness;      // unscaled net functional attaining the sup
    double witness_psi = 1.0;
    int witness_piece = -1;  // 0-based piece index
};

/*!
 * |||x||| = sup{ psi(f) f(x) : f in the nets }.  The caller is responsible
 * for the decomposition covering a boundary of the base norm; under that
 * premise the value sits strictly between ||x|| and (1+eps)||x|| for
 * nonzero x.
 */
inline StarNormResult star_norm(const NetFamily& nets, const SparseVector& x) {
    bool any = false;
    StarNormResult res;
    bool first = true;
    for (std::size_t n = 0; n < nets.nets.size(); ++n) {
        for (std::size_t i = 0; i < nets.nets[n].size(); ++i) {
            any = true;
            double v = nets.psi_values[n][i] * evaluate(nets.nets[n][i], x);
            if (first || v > res.value) {
                res.value = v;
                res.witness = nets.nets[n][i];
                res.witness_psi = nets.psi_values[n][i];
                res.witness_piece = static_cast<int>(n);
                first = false;
            }
        }
    }
    if (!any) throw Error("star norm requires nonempty nets");
    return res;
}

/// Scaled boundary D = { psi(f) f : f in the nets } as plain functionals.
inline std::vector<Functional> scaled_boundary(const NetFamily& nets) {
    std::vector<Functional> out;
    for (std::size_t n = 0; n < nets.nets.size(); ++n)
        for (std::size_t i = 0; i < nets.nets[n].size(); ++i) {
            Functional f = nets.psi_values[n][i] * nets.nets[n][i];
            f.piece_tag = static_cast<int>(n);
            out.push_back(std::move(f));
        }
    return out;
}

/// Vertices of a low-dimensional section of the renormed unit ball, as
/// ambient vectors.  This is the exact certificate the limit-defect check
/// consumes.
inline std::vector<SparseVector> star_section_ball_vertices(const NetFamily& nets,
                                                            const SectionSpec& section,
                                                            double tol = 1e-8) {
    auto halfspaces = restrict_functionals(scaled_boundary(nets), section, tol);
    Polytope poly = vertex_enumeration(halfspaces, section.dim(), tol);
    std::vector<SparseVector> out;
    out.reserve(poly.vertices.size());
    for (const auto& v : poly.vertices) out.push_back(section.to_ambient(v));
    return out;
}

struct LimitDefectReport {
    double measured = 0.0;   // dual norm of alpha*f on the section
    double threshold = 0.0;  // 1 - eps_n for the piece n of f
    int piece = 0;
    bool pass = false;
};

/*!
 * The limit-defect bound: a declared limit functional g = alpha*f with
 * alpha > 1 over a decomposition member f must have renormed dual norm at
 * most 1 - eps_n, where n is the piece of f.  The dual norm is computed
 * exactly as the maximum of g over the vertex set of a certified section of
 * the renormed unit ball.
 */
inline LimitDefectReport limit_defect_check(const PieceDecomposition& decomp, double eps,
                                            const Functional& f, double alpha,
                                            const std::vector<SparseVector>& section_ball_vertices,
                                            const ToleranceConfig& tol = {}) {
    if (!(alpha > 1.0)) throw Error("limit defect check requires alpha > 1");
    if (section_ball_vertices.empty()) throw Error("requires polytope certificate");
    auto [I, n] = decomp.membership_index(f);
    LimitDefectReport rep;
    rep.piece = n;
    rep.threshold = 1.0 - epsilon_schedule(eps, n);
    for (const auto& v : section_ball_vertices)
        rep.measured = std::max(rep.measured, alpha * evaluate(f, v));
    rep.pass = rep.measured <= rep.threshold + tol.eq_tol;
    return rep;
}

}  // namespace polyrenorm
