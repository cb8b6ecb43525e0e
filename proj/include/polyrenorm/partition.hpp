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
#include <vector>

#include "polyrenorm/core.hpp"
#include "polyrenorm/space.hpp"

namespace polyrenorm {

struct NakanoIndexData {
    int m = 0;
    int alpha = 0;   // minimal family index reaching beyond m (0-based)
    double beta = 1; // exponent p_alpha
};

/// alpha(m) = min{ n : k in A_n for some k > m }, beta(m) = p_{alpha(m)}.
/// Both are nondecreasing in m because the families are finite.
inline NakanoIndexData alpha_beta(const NakanoDescriptor& desc, int m) {
    for (std::size_t n = 0; n < desc.families.size(); ++n) {
        for (int k : desc.families[n]) {
            if (k > m) {
                return NakanoIndexData{m, static_cast<int>(n), desc.exponents[n]};
            }
        }
    }
    throw Error("window exhausted: no family coordinate beyond m");
}

/// Minimal m >= 0 with ||R_m x|| < q.  Finite support guarantees termination.
inline int tail_index(const Space& space, const SparseVector& x, double q) {
    if (!(q > 0.0 && q < 1.0)) throw Error("tail_index requires q in (0,1)");
    double nx = space.norm(x);
    if (std::fabs(nx - 1.0) > space.tol().eq_tol)
        throw Error("tail_index requires a unit vector");
    int m = 0;
    while (true) {
        SparseVector r = tail_projection(x, m);
        if (space.norm(r) < q) return m;
        ++m;
    }
}

enum class PartitionRule {
    kNakanoTail,  // label = tail_index(x, q)
    kOrliczHead,  // label = least n with ||P_{A_n(x)} x|| >= b_n
};

struct PartitionOptions {
    PartitionRule rule = PartitionRule::kNakanoTail;
    PieceMode piece_mode = PieceMode::kSchauder;
    double q = 0.5;              // tail rule parameter
    std::vector<double> b;       // head rule thresholds b_1..b_N
    int n_max = 0;               // largest admissible label; 0 = truncation_dim
    bool collect_overlaps = false;
};

struct PartitionAssignment {
    std::vector<int> labels;                    // minimal label per sample
    std::vector<std::vector<int>> all_labels;   // only when collect_overlaps
    std::vector<double> b_hat;                  // empirical piece bounds, index n-1
    std::vector<int> counts;                    // samples per label, index n-1
    std::vector<double> analytic_bound;         // per-label analytic lower bound (or 0)
    bool b_hat_positive = false;
    bool b_hat_trend_up = false;                // last labeled bound >= first
};

/*!
 * Labels every unit-sphere sample with its piece index and derives the
 * empirical bounds b_hat_n = min over samples labeled n of the cumulative
 * piece supremum.  The empirical minimum is an upper bound for the true
 * infimum over the whole sphere piece, so reports mark it "empirical"; the
 * per-sample analytic bound (1 - q^{beta(m)} in the Nakano model) is
 * certified separately by nakano_bm_bound_check.
 *
 * A sample that admits no label within n_max signals a configuration bug
 * and raises "partition incomplete".
 */
inline PartitionAssignment assign_partition(const Space& space,
                                            const std::vector<SparseVector>& samples,
                                            const PartitionOptions& opt) {
    PartitionAssignment out;
    int n_max = opt.n_max > 0 ? opt.n_max : space.truncation_dim();
    out.b_hat.assign(n_max, 1.0);
    out.counts.assign(n_max, 0);
    out.analytic_bound.assign(n_max, 0.0);
    std::vector<bool> seen(n_max, false);

    for (const auto& x : samples) {
        int label = -1;
        std::vector<int> labels_here;
        if (opt.rule == PartitionRule::kNakanoTail) {
            int m = tail_index(space, x, opt.q);
            if (m >= 1 && m <= n_max) label = m;
            if (opt.collect_overlaps) {
                for (int c = 1; c <= n_max; ++c)
                    if (space.norm(tail_projection(x, c)) < opt.q) labels_here.push_back(c);
            }
        } else {
            for (int n = 1; n <= n_max; ++n) {
                double b_n = n <= static_cast<int>(opt.b.size()) ? opt.b[n - 1] : 1.0;
                SparseVector px = project(x, head_set(x, n));
                if (space.norm(px) >= b_n) {
                    if (label < 0) label = n;
                    if (opt.collect_overlaps)
                        labels_here.push_back(n);
                    else
                        break;
                }
            }
        }
        if (label < 0) throw Error("partition incomplete: sample received no label");
        out.labels.push_back(label);
        if (opt.collect_overlaps) out.all_labels.push_back(labels_here);

        double sup = space.piece_sup(label, x, opt.piece_mode).value;
        int i = label - 1;
        out.counts[i] += 1;
        if (!seen[i] || sup < out.b_hat[i]) out.b_hat[i] = sup;
        seen[i] = true;
        if (space.kind() == SpaceKind::kNakano && opt.rule == PartitionRule::kNakanoTail) {
            auto ab = alpha_beta(space.nakano(), label);
            out.analytic_bound[i] = 1.0 - std::pow(opt.q, ab.beta);
        }
    }

    out.b_hat_positive = true;
    for (int i = 0; i < n_max; ++i)
        if (seen[i] && !(out.b_hat[i] > 0.0)) out.b_hat_positive = false;
    int first = -1, last = -1;
    for (int i = 0; i < n_max; ++i)
        if (seen[i]) {
            if (first < 0) first = i;
            last = i;
        }
    out.b_hat_trend_up = first < 0 || out.b_hat[last] >= out.b_hat[first] - 1e-12;
    return out;
}

struct NakanoChainReport {
    int m = 0;
    double beta = 1.0;
    double q_pow_beta = 0.0;
    std::vector<CheckItem> links;
    bool all_pass = true;
};

/*!
 * The quantitative chain behind the Nakano piece bounds, verified on one
 * unit-sphere point with m = tail_index(x, q):
 *
 *   Phi(R_m x) <= q^{beta(m)}
 *   Phi(P_m x) >= 1 - q^{beta(m)}
 *   Phi(P_m x) <= ||P_m x||
 *   ||P_m x||  >= 1 - q^{beta(m)}
 *
 * Each link is reported with its margin; a negative margin names the link
 * that failed.
 */
inline NakanoChainReport nakano_bm_bound_check(const Space& space, const SparseVector& x,
                                               double q) {
    if (space.kind() != SpaceKind::kNakano)
        throw Error("nakano_bm_bound_check requires a nakano space");
    NakanoChainReport rep;
    double tol = space.tol().eq_tol;
    rep.m = tail_index(space, x, q);
    auto ab = alpha_beta(space.nakano(), rep.m);
    rep.beta = ab.beta;
    rep.q_pow_beta = std::pow(q, ab.beta);

    SparseVector head = head_projection(x, rep.m);
    SparseVector tail = tail_projection(x, rep.m);
    double phi_tail = space.modular(tail);
    double phi_head = space.modular(head);
    double norm_head = space.norm(head);

    auto push = [&rep](const std::string& name, double margin, double tol_) {
        rep.links.push_back(CheckItem{name, margin >= -tol_, margin});
        if (margin < -tol_) rep.all_pass = false;
    };
    push("phi_tail_le_q_beta", rep.q_pow_beta - phi_tail, tol);
    push("phi_head_ge_1_minus_q_beta", phi_head - (1.0 - rep.q_pow_beta), tol);
    push("phi_head_le_norm_head", norm_head - phi_head, tol);
    push("norm_head_ge_1_minus_q_beta", norm_head - (1.0 - rep.q_pow_beta), tol);
    return rep;
}

struct OrliczChainReport {
    int n = 0;
    double b_n = 0.0;
    double d_n = 0.0;
    CheckItem head_sum;     // sum_{A_n(x)} M(x/b_n) <= 1
    CheckItem tail_sum;     // sum_{not in A_n(x)} M(K x) <= 1
    CheckItem ratio_bound;  // M(K x_g) >= d_n M(x_g) off the head set
    CheckItem closing;      // b_n + 1/d_n < 1
    bool full_chain_holds = false;  // head+tail+ratio simultaneously
};

/*!
 * Evaluates the three inequalities of the Orlicz sphere-cover argument on a
 * unit vector, plus the closing combination b_n + 1/d_n < 1.  On sphere
 * points the three cannot hold simultaneously (their conjunction forces
 * 1 <= b_n + 1/d_n < 1), and full_chain_holds records exactly that event.
 * This is a report, not an assertion.
 */
inline OrliczChainReport orlicz_chain_check(const OrliczDescriptor& desc, const SparseVector& x,
                                          int n, double b_n, double d_n) {
    if (n < 1) throw Error("orlicz_chain_check requires n >= 1");
    OrliczChainReport rep;
    rep.n = n;
    rep.b_n = b_n;
    rep.d_n = d_n;

    auto head = head_set(x, n);
    double head_sum = 0.0, tail_sum = 0.0;
    double ratio_margin = std::numeric_limits<double>::infinity();
    for (const auto& [k, v] : x.entries()) {
        if (head.count(k)) {
            head_sum += desc.M(v / b_n);
        } else {
            tail_sum += desc.M(desc.K * v);
            ratio_margin = std::min(ratio_margin, desc.M(desc.K * v) - d_n * desc.M(v));
        }
    }
    if (!std::isfinite(ratio_margin)) ratio_margin = 0.0;  // empty tail holds trivially

    rep.head_sum = CheckItem{"head_sum_le_1", head_sum <= 1.0, 1.0 - head_sum};
    rep.tail_sum = CheckItem{"tail_sum_le_1", tail_sum <= 1.0, 1.0 - tail_sum};
    rep.ratio_bound = CheckItem{"ratio_ge_dn", ratio_margin >= 0.0, ratio_margin};
    rep.closing = CheckItem{"bn_plus_inv_dn_lt_1", b_n + 1.0 / d_n < 1.0,
                            1.0 - (b_n + 1.0 / d_n)};
    rep.full_chain_holds = rep.head_sum.pass && rep.tail_sum.pass && rep.ratio_bound.pass;
    return rep;
}

}  // namespace polyrenorm
