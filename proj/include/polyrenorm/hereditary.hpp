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

namespace polyrenorm {

using Member = std::set<int>;

/// A hereditary (downward closed) family of finite subsets of {1..window}.
/// The empty set is always a member.  Construction validates the closure
/// property; a family violating it is rejected.
class HereditaryFamily {
  public:
    static constexpr std::size_t kMemberCap = 1u << 16;

    HereditaryFamily(int window, std::set<Member> members)
        : window_(window), members_(std::move(members)) {
        if (window_ < 1) throw Error("hereditary family: window must be >= 1");
        members_.insert(Member{});
        if (members_.size() > kMemberCap)
            throw Error("hereditary family too large (member cap exceeded)");
        for (const auto& A : members_) {
            for (int g : A) {
                if (g < 1 || g > window_)
                    throw Error("hereditary family: member coordinate outside window");
                Member sub = A;
                sub.erase(g);
                if (!members_.count(sub))
                    throw Error("hereditary closure violated: family is not downward closed");
            }
        }
    }

    /// Finite Schreier family on {1..window}: all A with card(A) <= min(A).
    static HereditaryFamily schreier(int window) {
        std::set<Member> members;
        members.insert(Member{});
        std::vector<int> pick;
        // Members with minimum m have at most m elements drawn from {m..window}.
        for (int m = 1; m <= window; ++m) {
            pick.assign(1, m);
            append_members(members, pick, m + 1, window, m);
        }
        return HereditaryFamily(window, std::move(members));
    }

    /// All subsets of cardinality at most k (k = 1 reduces the norm to sup).
    static HereditaryFamily cardinality_at_most(int window, int k) {
        std::set<Member> members;
        members.insert(Member{});
        std::vector<int> pick;
        for (int first = 1; first <= window; ++first) {
            pick.assign(1, first);
            append_members(members, pick, first + 1, window, k);
        }
        return HereditaryFamily(window, std::move(members));
    }

    int window() const { return window_; }
    const std::set<Member>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(const Member& A) const { return members_.count(A) > 0; }

  private:
    static void append_members(std::set<Member>& out, std::vector<int>& pick, int next,
                               int window, int max_card) {
        out.insert(Member(pick.begin(), pick.end()));
        if (static_cast<int>(pick.size()) >= max_card) return;
        for (int k = next; k <= window; ++k) {
            pick.push_back(k);
            append_members(out, pick, k + 1, window, max_card);
            pick.pop_back();
        }
        if (out.size() > kMemberCap)
            throw Error("hereditary family too large (member cap exceeded)");
    }

    int window_;
    std::set<Member> members_;
};

struct HkNormResult {
    double value = 0.0;
    Member attaining;  // lexicographically least maximizer
};

/// ||x||_K = max over members A of sum_{g in A} |x_g|, exhaustively.
inline HkNormResult hk_norm(const HereditaryFamily& family, const SparseVector& x) {
    HkNormResult res;
    for (const auto& A : family.members()) {
        double s = 0.0;
        for (int g : A) s += std::fabs(x.at(g));
        if (s > res.value) {
            res.value = s;
            res.attaining = A;
        }
    }
    return res;
}

struct HkToCkResult {
    std::map<Member, double> values;  // (Tx)(A) = sum_{g in A} x_g
    double sup_abs = 0.0;
    double distortion = 1.0;  // ||x||_K / sup_A |(Tx)(A)|
};

/// The isomorphism T : h_K -> C(K), evaluated pointwise on all members.
inline HkToCkResult hk_to_ck(const HereditaryFamily& family, const SparseVector& x) {
    HkToCkResult res;
    for (const auto& A : family.members()) {
        double s = 0.0;
        for (int g : A) s += x.at(g);
        res.values[A] = s;
        res.sup_abs = std::max(res.sup_abs, std::fabs(s));
    }
    double norm = hk_norm(family, x).value;
    res.distortion = res.sup_abs > 0.0 ? norm / res.sup_abs : 1.0;
    return res;
}

struct Stratum {
    int cardinality = 0;
    std::vector<Member> members;
    // Each member is isolated within its stratum by its own coordinate
    // membership pattern; the member itself is the separating witness.
};

/// Partition of the family by member cardinality (the discrete strata).
inline std::vector<Stratum> strata(const HereditaryFamily& family) {
    std::map<int, Stratum> by_card;
    for (const auto& A : family.members()) {
        int c = static_cast<int>(A.size());
        auto& s = by_card[c];
        s.cardinality = c;
        s.members.push_back(A);
    }
    std::vector<Stratum> out;
    for (auto& [c, s] : by_card) out.push_back(std::move(s));
    return out;
}

/// Signed indicator functional of a member with the given sign pattern.
inline Functional member_functional(const Member& A, const std::vector<int>& signs) {
    if (signs.size() != A.size()) throw Error("member_functional: sign pattern size mismatch");
    Functional f;
    std::size_t i = 0;
    for (int g : A) f.set(g, signs[i++] >= 0 ? 1.0 : -1.0);
    return f;
}

}  // namespace polyrenorm
