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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polyrenorm/core.hpp"

namespace polyrenorm {

using Coeffs = std::vector<double>;

namespace detail {

// Gaussian elimination with partial pivoting on a square system A v = rhs.
inline std::optional<Coeffs> solve_square(std::vector<Coeffs> A, Coeffs rhs, double tol) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[pivot][col])) pivot = r;
        if (std::fabs(A[pivot][col]) < tol) return std::nullopt;
        std::swap(A[pivot], A[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double factor = A[r][col] / A[col][col];
            for (int c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    Coeffs v(n);
    for (int i = 0; i < n; ++i) v[i] = rhs[i] / A[i][i];
    return v;
}

inline int matrix_rank(std::vector<Coeffs> rows, double tol) {
    if (rows.empty()) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        double best = tol;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (std::fabs(rows[r][col]) > best) {
                best = std::fabs(rows[r][col]);
                pivot = r;
            }
        if (pivot < 0) continue;
        std::swap(rows[pivot], rows[rank]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            double factor = rows[r][col] / rows[rank][col];
            for (int c = col; c < ncols; ++c) rows[r][c] -= factor * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

// A nonzero null vector of a row set with rank < ncols, if one exists.
inline std::optional<Coeffs> null_vector(std::vector<Coeffs> rows, int ncols, double tol) {
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        double best = tol;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (std::fabs(rows[r][col]) > best) {
                best = std::fabs(rows[r][col]);
                pivot = r;
            }
        if (pivot < 0) continue;
        std::swap(rows[pivot], rows[rank]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank) continue;
            double factor = rows[r][col] / rows[rank][col];
            for (int c = col; c < ncols; ++c) rows[r][c] -= factor * rows[rank][c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank >= ncols) return std::nullopt;
    // Choose the first free column, set it to 1, back-substitute the pivots.
    std::vector<bool> is_pivot(ncols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = 0;
    while (free_col < ncols && is_pivot[free_col]) ++free_col;
    Coeffs v(ncols, 0.0);
    v[free_col] = 1.0;
    for (int r = rank - 1; r >= 0; --r) {
        int pc = pivot_col[r];
        double s = rows[r][free_col] * v[free_col];
        v[pc] = -s / rows[r][pc];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

inline double dot(const Coeffs& a, const Coeffs& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <typename Fn>
inline void for_each_subset(int n, int k, Fn&& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/// A 2- to 4-dimensional section spanned by linearly independent sparse
/// vectors.  Independence is verified by rank computation at tolerance.
struct SectionSpec {
    std::vector<SparseVector> basis;

    void validate(double tol = 1e-8) const {
        if (basis.size() < 2 || basis.size() > 4)
            throw Error("section basis must contain 2 to 4 vectors");
        int max_coord = 0;
        for (const auto& v : basis) max_coord = std::max(max_coord, v.max_coordinate());
        std::vector<Coeffs> rows;
        for (const auto& v : basis) {
            Coeffs row(max_coord, 0.0);
            for (const auto& [k, val] : v.entries()) row[k - 1] = val;
            rows.push_back(std::move(row));
        }
        if (detail::matrix_rank(rows, tol) != static_cast<int>(basis.size()))
            throw Error("section basis vectors are linearly dependent");
    }

    int dim() const { return static_cast<int>(basis.size()); }

    SparseVector to_ambient(const Coeffs& v) const {
        SparseVector x;
        for (std::size_t i = 0; i < basis.size(); ++i) x = x + v[i] * basis[i];
        return x;
    }
};

/// Restriction of functionals to section coordinates: f maps to
/// (f(b_1), ..., f(b_d)).  Zero rows are dropped and duplicates within
/// tolerance are merged.
inline std::vector<Coeffs> restrict_functionals(const std::vector<Functional>& fs,
                                                const SectionSpec& section, double tol = 1e-8) {
    std::vector<Coeffs> rows;
    for (const auto& f : fs) {
        Coeffs row(section.dim());
        double maxabs = 0.0;
        for (int i = 0; i < section.dim(); ++i) {
            row[i] = evaluate(f, section.basis[i]);
            maxabs = std::max(maxabs, std::fabs(row[i]));
        }
        if (maxabs <= tol) continue;
        bool dup = false;
        for (const auto& r : rows) {
            double d = 0.0;
            for (int i = 0; i < section.dim(); ++i) d = std::max(d, std::fabs(r[i] - row[i]));
            if (d <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) rows.push_back(std::move(row));
    }
    return rows;
}

struct Polytope {
    std::vector<Coeffs> halfspaces;  // constraints c . v <= 1
    std::vector<Coeffs> vertices;
    std::vector<int> saturation;     // per halfspace: number of saturating vertices
    int dim = 0;

    int redundant_facets() const {
        int n = 0;
        for (int s : saturation)
            if (s < dim) ++n;
        return n;
    }
};

/*!
 * Exact vertex enumeration of {v : c . v <= 1 for all c} by brute force over
 * dim-subsets of halfspaces: solve each square saturated system, keep
 * feasible solutions, deduplicate.  Unboundedness is detected first by
 * searching for a recession direction among the null spaces of
 * (dim-1)-subsets of the normals (extreme rays of the recession cone live
 * there) and the null space of the full normal matrix (lineality).
 */
inline Polytope vertex_enumeration(const std::vector<Coeffs>& halfspaces, int dim,
                                   double tol = 1e-8) {
    if (dim < 2 || dim > 4) throw Error("vertex enumeration supports dimensions 2 to 4");
    const int m = static_cast<int>(halfspaces.size());
    if (m > 5000) throw Error("too many halfspaces");
    for (const auto& c : halfspaces)
        if (static_cast<int>(c.size()) != dim)
            throw Error("halfspace coefficient dimension mismatch");

    auto is_recession = [&](const Coeffs& u) {
        for (const auto& c : halfspaces)
            if (detail::dot(c, u) > tol) return false;
        return true;
    };

    if (m < dim + 1) throw Error("not a polytope: unbounded");
    {
        std::vector<Coeffs> all(halfspaces.begin(), halfspaces.end());
        if (auto u = detail::null_vector(all, dim, tol)) {
            if (is_recession(*u)) throw Error("not a polytope: unbounded");
            for (double& x : *u) x = -x;
            if (is_recession(*u)) throw Error("not a polytope: unbounded");
        }
    }
    detail::for_each_subset(m, dim - 1, [&](const std::vector<int>& idx) {
        std::vector<Coeffs> rows;
        for (int i : idx) rows.push_back(halfspaces[i]);
        auto u = detail::null_vector(rows, dim, tol);
        if (!u) return;
        if (is_recession(*u)) throw Error("not a polytope: unbounded");
        for (double& x : *u) x = -x;
        if (is_recession(*u)) throw Error("not a polytope: unbounded");
    });

    Polytope poly;
    poly.dim = dim;
    poly.halfspaces = halfspaces;
    detail::for_each_subset(m, dim, [&](const std::vector<int>& idx) {
        std::vector<Coeffs> A;
        Coeffs rhs(dim, 1.0);
        for (int i : idx) A.push_back(halfspaces[i]);
        auto v = detail::solve_square(std::move(A), std::move(rhs), tol);
        if (!v) return;
        for (const auto& c : halfspaces)
            if (detail::dot(c, *v) > 1.0 + tol) return;
        for (const auto& w : poly.vertices) {
            double d = 0.0;
            for (int i = 0; i < dim; ++i) d = std::max(d, std::fabs(w[i] - (*v)[i]));
            if (d <= tol) return;
        }
        poly.vertices.push_back(*v);
    });

    std::sort(poly.vertices.begin(), poly.vertices.end());
    poly.saturation.assign(m, 0);
    for (int j = 0; j < m; ++j)
        for (const auto& v : poly.vertices)
            if (std::fabs(detail::dot(halfspaces[j], v) - 1.0) <= tol) ++poly.saturation[j];
    return poly;
}

struct CertReport {
    std::vector<CheckItem> checks;
    int facet_count = 0;
    int vertex_count = 0;
    int redundant_facets = 0;
    bool pass = true;

    void add(const std::string& name, bool ok, double margin) {
        checks.push_back(CheckItem{name, ok, margin});
        if (!ok) pass = false;
    }
};

/*!
 * The two-sided polytope approximation check B subset P subset (1+eta) B:
 * every facet functional must have section dual norm at most 1 (so the ball
 * fits inside the polytope), and every vertex must have base norm at most
 * 1 + eta.  The facet dual norm oracle is exact where a finite boundary is
 * available and sample-maximized otherwise; the vertex side is always exact.
 */
inline CertReport certify_sandwich(const SectionSpec& section, const Polytope& poly, double eta,
                                   const std::function<double(const SparseVector&)>& base_norm,
                                   const std::function<double(const Coeffs&)>& facet_dual_norm,
                                   double tol = 1e-8) {
    CertReport rep;
    rep.facet_count = static_cast<int>(poly.halfspaces.size());
    rep.vertex_count = static_cast<int>(poly.vertices.size());
    rep.redundant_facets = poly.redundant_facets();

    double worst_facet = std::numeric_limits<double>::infinity();
    for (const auto& c : poly.halfspaces)
        worst_facet = std::min(worst_facet, 1.0 - facet_dual_norm(c));
    rep.add("ball_inside_polytope", worst_facet >= -tol, worst_facet);

    double worst_vertex = std::numeric_limits<double>::infinity();
    std::string worst_name;
    for (const auto& v : poly.vertices) {
        double n = base_norm(section.to_ambient(v));
        double margin = (1.0 + eta) - n;
        if (margin < worst_vertex) {
            worst_vertex = margin;
            worst_name.clear();
            for (double x : v) worst_name += (worst_name.empty() ? "(" : ", ") + detail::format_double(x);
            worst_name += ")";
        }
    }
    rep.add("polytope_inside_inflated_ball" + (worst_vertex < -tol ? " at vertex " + worst_name : ""),
            worst_vertex >= -tol, worst_vertex);
    return rep;
}

/*!
 * Certifies that a finite functional set is a polyhedral boundary for a
 * section: the restricted halfspaces carve a bounded polytope, and every
 * sampled unit vector of the section norm attains supremum 1 over the set.
 */
inline CertReport certify_polyhedral_section(const std::vector<Functional>& boundary,
                                             const SectionSpec& section,
                                             const std::function<double(const SparseVector&)>& norm,
                                             const std::vector<Coeffs>& sample_directions,
                                             double tol = 1e-8, Polytope* out_poly = nullptr) {
    section.validate(tol);
    CertReport rep;
    auto halfspaces = restrict_functionals(boundary, section, tol);
    Polytope poly = vertex_enumeration(halfspaces, section.dim(), tol);
    rep.facet_count = static_cast<int>(poly.halfspaces.size());
    rep.vertex_count = static_cast<int>(poly.vertices.size());
    rep.redundant_facets = poly.redundant_facets();
    rep.add("polytope_bounded", true, 0.0);

    double worst = std::numeric_limits<double>::infinity();
    for (const auto& dir : sample_directions) {
        SparseVector x = section.to_ambient(dir);
        if (x.empty()) continue;
        double nx = norm(x);
        if (!(nx > 0.0)) continue;
        SparseVector unit = (1.0 / nx) * x;
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& f : boundary) best = std::max(best, evaluate(f, unit));
        worst = std::min(worst, best - 1.0);
        if (best < 1.0 - tol) break;
    }
    bool attained = worst >= -tol;
    rep.add(attained ? "boundary_attains_on_samples"
                     : "restricted set is not a boundary for this section",
            attained, worst);

    bool symmetric = true;
    for (const auto& v : poly.vertices) {
        bool found = false;
        for (const auto& w : poly.vertices) {
            double d = 0.0;
            for (int i = 0; i < poly.dim; ++i) d = std::max(d, std::fabs(v[i] + w[i]));
            if (d <= tol) {
                found = true;
                break;
            }
        }
        symmetric = symmetric && found;
    }
    rep.add("vertex_set_symmetric", symmetric, symmetric ? 0.0 : -1.0);

    if (out_poly) *out_poly = std::move(poly);
    return rep;
}

}  // namespace polyrenorm
