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
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyrenorm {

/// All contract violations and declared error conditions surface as this type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// One verification record.  Checks always carry a numeric margin (how far
/// the inequality held or failed by), never a bare boolean.
struct CheckItem {
    std::string name;
    bool pass = false;
    double margin = 0.0;
};

/// Numerical tolerances shared across the library.  eq_tol is the equality
/// slack for checks and deduplication; bisect_tol is the relative bracket
/// width for scalar root solves.
struct ToleranceConfig {
    double eq_tol = 1e-8;
    double bisect_tol = 1e-10;

    void validate() const {
        if (!(eq_tol > 0) || !(bisect_tol > 0))
            throw Error("tolerances must be strictly positive");
        if (eq_tol < bisect_tol)
            throw Error("eq_tol must be >= bisect_tol");
    }
};

namespace detail {

// Locale-independent shortest round-trip formatting for doubles.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

using CoordMap = std::map<int, double>;

inline void coord_set(CoordMap& m, int idx, double value) {
    if (idx < 1) throw Error("coordinate indices must be >= 1");
    if (value == 0.0)
        m.erase(idx);
    else
        m[idx] = value;
}

inline double coord_get(const CoordMap& m, int idx) {
    auto it = m.find(idx);
    return it == m.end() ? 0.0 : it->second;
}

// Sum over common support of entrywise products.
inline double coord_dot(const CoordMap& a, const CoordMap& b) {
    double sum = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            sum += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

inline CoordMap coord_axpy(double alpha, const CoordMap& a, double beta, const CoordMap& b) {
    CoordMap out;
    for (const auto& [k, v] : a) coord_set(out, k, alpha * v);
    for (const auto& [k, v] : b) coord_set(out, k, coord_get(out, k) + beta * v);
    return out;
}

inline std::string coord_text(const CoordMap& m) {
    std::string out;
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) out += ',';
        out += std::to_string(k);
        out += ':';
        out += format_double(v);
        first = false;
    }
    return out;
}

// Parses "idx:value,idx:value" with ascending indices.
inline CoordMap coord_parse(const std::string& text) {
    CoordMap out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::size_t colon = text.find(':', pos);
        if (colon == std::string::npos || colon >= comma)
            throw Error("malformed sparse vector text: " + text);
        int idx = 0;
        auto r1 = std::from_chars(text.data() + pos, text.data() + colon, idx);
        if (r1.ec != std::errc{} || r1.ptr != text.data() + colon)
            throw Error("malformed coordinate index in: " + text);
        double val = 0.0;
        auto r2 = std::from_chars(text.data() + colon + 1, text.data() + comma, val);
        if (r2.ec != std::errc{} || r2.ptr != text.data() + comma)
            throw Error("malformed coordinate value in: " + text);
        coord_set(out, idx, val);
        pos = comma + 1;
    }
    return out;
}

}  // namespace detail

/// Finitely supported real sequence.  Entries with value zero are never
/// stored, so the key set is exactly the support.
class SparseVector {
  public:
    SparseVector() = default;
    SparseVector(std::initializer_list<std::pair<int, double>> init) {
        for (const auto& [k, v] : init) set(k, v);
    }

    static SparseVector unit(int idx) {
        SparseVector x;
        x.set(idx, 1.0);
        return x;
    }

    static SparseVector parse(const std::string& text) {
        SparseVector x;
        x.entries_ = detail::coord_parse(text);
        return x;
    }

    void set(int idx, double value) { detail::coord_set(entries_, idx, value); }
    double at(int idx) const { return detail::coord_get(entries_, idx); }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const detail::CoordMap& entries() const { return entries_; }
    std::string to_text() const { return detail::coord_text(entries_); }

    int max_coordinate() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

    friend SparseVector operator*(double a, const SparseVector& x) {
        SparseVector out;
        out.entries_ = detail::coord_axpy(a, x.entries_, 0.0, {});
        return out;
    }
    friend SparseVector operator+(const SparseVector& x, const SparseVector& y) {
        SparseVector out;
        out.entries_ = detail::coord_axpy(1.0, x.entries_, 1.0, y.entries_);
        return out;
    }
    friend SparseVector operator-(const SparseVector& x, const SparseVector& y) {
        SparseVector out;
        out.entries_ = detail::coord_axpy(1.0, x.entries_, -1.0, y.entries_);
        return out;
    }
    friend bool operator==(const SparseVector& a, const SparseVector& b) {
        return a.entries_ == b.entries_;
    }

  private:
    detail::CoordMap entries_;
};

/// Finitely supported dual functional.  Carries an optional piece tag used by
/// the renorming engines to record which piece the functional belongs to.
class Functional {
  public:
    Functional() = default;
    Functional(std::initializer_list<std::pair<int, double>> init) {
        for (const auto& [k, v] : init) set(k, v);
    }

    static Functional unit(int idx) {
        Functional f;
        f.set(idx, 1.0);
        return f;
    }

    static Functional from_vector(const SparseVector& x) {
        Functional f;
        f.entries_ = x.entries();
        return f;
    }

    static Functional parse(const std::string& text) {
        Functional f;
        f.entries_ = detail::coord_parse(text);
        return f;
    }

    void set(int idx, double value) { detail::coord_set(entries_, idx, value); }
    double at(int idx) const { return detail::coord_get(entries_, idx); }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const detail::CoordMap& entries() const { return entries_; }
    std::string to_text() const { return detail::coord_text(entries_); }

    std::optional<int> piece_tag;

    friend Functional operator*(double a, const Functional& f) {
        Functional out;
        out.entries_ = detail::coord_axpy(a, f.entries_, 0.0, {});
        out.piece_tag = f.piece_tag;
        return out;
    }
    friend Functional operator+(const Functional& f, const Functional& g) {
        Functional out;
        out.entries_ = detail::coord_axpy(1.0, f.entries_, 1.0, g.entries_);
        return out;
    }
    friend Functional operator-(const Functional& f, const Functional& g) {
        Functional out;
        out.entries_ = detail::coord_axpy(1.0, f.entries_, -1.0, g.entries_);
        return out;
    }
    friend bool operator==(const Functional& a, const Functional& b) {
        return a.entries_ == b.entries_;
    }

  private:
    detail::CoordMap entries_;
};

/// Pairing <f, x>, a finite sum over the common support.
inline double evaluate(const Functional& f, const SparseVector& x) {
    return detail::coord_dot(f.entries(), x.entries());
}

inline std::set<int> support(const SparseVector& x) {
    std::set<int> s;
    for (const auto& [k, v] : x.entries()) s.insert(k);
    return s;
}

inline std::set<int> support(const Functional& f) {
    std::set<int> s;
    for (const auto& [k, v] : f.entries()) s.insert(k);
    return s;
}

/// Support coordinates ordered by non-increasing |value|, ties broken by
/// ascending coordinate index.
inline std::vector<int> rearrangement_map(const SparseVector& x) {
    std::vector<int> idx;
    idx.reserve(x.size());
    for (const auto& [k, v] : x.entries()) idx.push_back(k);
    std::stable_sort(idx.begin(), idx.end(), [&x](int a, int b) {
        double va = std::fabs(x.at(a)), vb = std::fabs(x.at(b));
        if (va != vb) return va > vb;
        return a < b;
    });
    return idx;
}

/// First min(n, |supp x|) coordinates of the rearrangement.
inline std::set<int> head_set(const SparseVector& x, int n) {
    if (n < 0) throw Error("head_set requires n >= 0");
    auto order = rearrangement_map(x);
    std::set<int> head;
    for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(n); ++i)
        head.insert(order[i]);
    return head;
}

/// Coordinate restriction P_sigma.
inline SparseVector project(const SparseVector& x, const std::set<int>& sigma) {
    SparseVector out;
    for (const auto& [k, v] : x.entries())
        if (sigma.count(k)) out.set(k, v);
    return out;
}

/// Head projection P_m onto coordinates {1..m}.
inline SparseVector head_projection(const SparseVector& x, int m) {
    SparseVector out;
    for (const auto& [k, v] : x.entries())
        if (k <= m) out.set(k, v);
    return out;
}

/// Tail R_m(x) = x - P_m(x).
inline SparseVector tail_projection(const SparseVector& x, int m) {
    SparseVector out;
    for (const auto& [k, v] : x.entries())
        if (k > m) out.set(k, v);
    return out;
}

}  // namespace polyrenorm
