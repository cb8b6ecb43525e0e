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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polyrenorm/polytope.hpp"
#include "polyrenorm/renorm.hpp"
#include "polyrenorm/sampling.hpp"
#include "polyrenorm/star.hpp"

namespace polyrenorm {
namespace {

std::vector<Functional> schreier_boundary(int window) {
    auto decomp = hk_strata_decomposition(HereditaryFamily::schreier(window));
    std::vector<Functional> out;
    for (const auto& piece : decomp.pieces()) out.insert(out.end(), piece.begin(), piece.end());
    return out;
}

TEST_CASE("section specs verify linear independence") {
    SectionSpec good{{SparseVector::unit(1), SparseVector::unit(2)}};
    CHECK_NOTHROW(good.validate());

    SectionSpec dep{{SparseVector::unit(1), 2.0 * SparseVector::unit(1)}};
    CHECK_THROWS_WITH(dep.validate(), Catch::Matchers::ContainsSubstring("linearly dependent"));

    SectionSpec tiny{{SparseVector::unit(1)}};
    CHECK_THROWS_AS(tiny.validate(), Error);
}

TEST_CASE("functional restriction drops zero rows and merges duplicates") {
    SectionSpec section{{SparseVector::unit(1), SparseVector::unit(2)}};
    Functional e1{{1, 1.0}};
    Functional off{{5, 2.0}};
    auto rows = restrict_functionals({e1, -1.0 * e1, off, e1}, section);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == Coeffs{1.0, 0.0});
    CHECK(rows[1] == Coeffs{-1.0, 0.0});
}

TEST_CASE("vertex enumeration recovers the square and the cross polytope") {
    std::vector<Coeffs> box = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    auto poly = vertex_enumeration(box, 2);
    REQUIRE(poly.vertices.size() == 4);
    for (const auto& v : poly.vertices) {
        CHECK(std::fabs(std::fabs(v[0]) - 1.0) <= 1e-12);
        CHECK(std::fabs(std::fabs(v[1]) - 1.0) <= 1e-12);
    }

    std::vector<Coeffs> diamond = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    auto poly2 = vertex_enumeration(diamond, 2);
    REQUIRE(poly2.vertices.size() == 4);
    std::vector<Coeffs> expect = {{-1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}, {1.0, 0.0}};
    for (std::size_t i = 0; i < expect.size(); ++i)
        for (int c = 0; c < 2; ++c)
            CHECK(std::fabs(poly2.vertices[i][c] - expect[i][c]) <= 1e-12);

    std::vector<Coeffs> slab = {{1, 0}, {-1, 0}};
    CHECK_THROWS_WITH(vertex_enumeration(slab, 2),
                      Catch::Matchers::ContainsSubstring("unbounded"));

    std::vector<Coeffs> open3d = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
    CHECK_THROWS_WITH(vertex_enumeration(open3d, 3),
                      Catch::Matchers::ContainsSubstring("unbounded"));

    // Unbounded along a direction that is not a coordinate axis.
    std::vector<Coeffs> wedge = {{1, 1, 0}, {1, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    CHECK_THROWS_WITH(vertex_enumeration(wedge, 3),
                      Catch::Matchers::ContainsSubstring("unbounded"));
}

TEST_CASE("vertices saturate at least dim facets and honor symmetry") {
    auto boundary = schreier_boundary(6);
    SectionSpec section{{SparseVector::unit(2), SparseVector::unit(3)}};
    auto rows = restrict_functionals(boundary, section);
    auto poly = vertex_enumeration(rows, 2);
    for (const auto& v : poly.vertices) {
        int sat = 0;
        for (const auto& c : poly.halfspaces)
            if (std::fabs(detail::dot(c, v) - 1.0) <= 1e-8) ++sat;
        CHECK(sat >= poly.dim);
    }
    // Non-redundant facets touch a vertex with value one.
    for (std::size_t j = 0; j < poly.halfspaces.size(); ++j) {
        if (poly.saturation[j] < poly.dim) continue;
        double best = 0.0;
        for (const auto& v : poly.vertices) best = std::max(best, detail::dot(poly.halfspaces[j], v));
        CHECK_THAT(best, Catch::Matchers::WithinAbs(1.0, 1e-7));
    }
}

TEST_CASE("the schreier base ball sections have the exact vertex sets") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space space(HereditaryFamily::schreier(6), tol);
    auto boundary = schreier_boundary(6);
    auto norm = [&space](const SparseVector& x) { return space.norm(x); };
    auto dirs = section_directions(2, 50, 91);

    // Section (e1, e2): the pair {1,2} is inadmissible, so the ball is the
    // square with corners (+-1, +-1).
    SectionSpec s12{{SparseVector::unit(1), SparseVector::unit(2)}};
    Polytope poly12;
    auto rep12 = certify_polyhedral_section(boundary, s12, norm, dirs, 1e-8, &poly12);
    CHECK(rep12.pass);
    CHECK(rep12.vertex_count == 4);
    for (const auto& v : poly12.vertices) {
        CHECK(std::fabs(std::fabs(v[0]) - 1.0) <= 1e-9);
        CHECK(std::fabs(std::fabs(v[1]) - 1.0) <= 1e-9);
        CHECK(std::fabs(space.norm(s12.to_ambient(v)) - 1.0) <= 1e-7);
    }

    // Section (e2, e3): the pair {2,3} is admissible, so the diagonal facets
    // dominate the coordinate ones and the ball is the cross polytope: eight
    // supplied halfspaces, four of them redundant, four vertices.
    SectionSpec s23{{SparseVector::unit(2), SparseVector::unit(3)}};
    Polytope poly23;
    auto rep23 = certify_polyhedral_section(boundary, s23, norm, dirs, 1e-8, &poly23);
    CHECK(rep23.pass);
    CHECK(rep23.facet_count == 8);
    CHECK(rep23.redundant_facets == 4);
    CHECK(rep23.vertex_count == 4);
    for (const auto& v : poly23.vertices)
        CHECK(std::fabs(space.norm(s23.to_ambient(v)) - 1.0) <= 1e-7);
}

TEST_CASE("sandwich certification reproduces the square-versus-disk geometry") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space l2(OrliczDescriptor{OrliczKind::kPower, 2.0, 2.0}, 2, tol);
    SectionSpec section{{SparseVector::unit(1), SparseVector::unit(2)}};
    std::vector<Coeffs> box = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    auto poly = vertex_enumeration(box, 2);

    auto norm = [&l2](const SparseVector& x) { return l2.norm(x); };
    auto dual = [](const Coeffs& c) { return std::hypot(c[0], c[1]); };

    double eta = std::sqrt(2.0) - 1.0;
    auto rep = certify_sandwich(section, poly, eta, norm, dual);
    CHECK(rep.pass);
    // Zero margin at the corners.
    CHECK_THAT(rep.checks[1].margin, Catch::Matchers::WithinAbs(0.0, 1e-9));

    auto fail = certify_sandwich(section, poly, 0.3, norm, dual);
    CHECK_FALSE(fail.pass);
    CHECK_THAT(fail.checks[1].name, Catch::Matchers::ContainsSubstring("at vertex"));
}

TEST_CASE("the hk ball certifies against its own boundary with eta zero") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space space(HereditaryFamily::schreier(6), tol);
    auto boundary = schreier_boundary(6);
    SectionSpec section{{SparseVector::unit(2), SparseVector::unit(3)}};
    auto rows = restrict_functionals(boundary, section);
    auto poly = vertex_enumeration(rows, 2);

    auto norm = [&space](const SparseVector& x) { return space.norm(x); };
    // Exact facet dual norms by maximizing over the ball's own vertex set.
    auto dual = [&poly](const Coeffs& c) {
        double best = 0.0;
        for (const auto& v : poly.vertices) best = std::max(best, detail::dot(c, v));
        return best;
    };
    auto rep = certify_sandwich(section, poly, 0.0, norm, dual);
    CHECK(rep.pass);
}

TEST_CASE("a two-piece renormed system certifies on a plane section") {
    Space base(HereditaryFamily::cardinality_at_most(2, 1));  // sup norm
    auto sys = BoundarySystem::explicit_pieces(
        {{Functional::unit(1), -1.0 * Functional::unit(1)},
         {Functional::unit(2), -1.0 * Functional::unit(2)}});
    auto params = compute_params({1.0, 1.0});
    auto boundary = boundary_enumerate(sys, params, 2);

    SectionSpec section{{SparseVector::unit(1), SparseVector::unit(2)}};
    auto norm = [&](const SparseVector& x) { return triple_norm(sys, params, x, base).value; };
    auto rep = certify_polyhedral_section(boundary, section, norm, section_directions(2, 40, 93));
    CHECK(rep.pass);
    // Scaled coordinate facets: a box with extents 1/a_1 and 1/a_2.
    CHECK(rep.vertex_count == 4);
}

TEST_CASE("renormed sections stay bounded polytopes in dimension three") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space space(HereditaryFamily::schreier(5), tol);
    auto sys = BoundarySystem::hk_extreme(space);
    auto params = compute_params({0.5, 0.6, 0.75, 0.8, 0.9});
    auto boundary = boundary_enumerate(sys, params, sys.piece_count());

    SectionSpec section{
        {SparseVector::unit(1), SparseVector::unit(2), SparseVector::unit(3)}};
    auto norm = [&](const SparseVector& x) { return triple_norm(sys, params, x, space).value; };
    auto dirs = section_directions(3, 80, 92);
    auto rep = certify_polyhedral_section(boundary, section, norm, dirs);
    CHECK(rep.pass);
    CHECK(rep.vertex_count > 0);
}

TEST_CASE("vertex enumeration handles dimension four") {
    std::vector<Coeffs> cube;
    for (int axis = 0; axis < 4; ++axis)
        for (double sign : {1.0, -1.0}) {
            Coeffs c(4, 0.0);
            c[axis] = sign;
            cube.push_back(c);
        }
    auto poly = vertex_enumeration(cube, 4);
    CHECK(poly.vertices.size() == 16);
    for (const auto& v : poly.vertices)
        for (double x : v) CHECK(std::fabs(std::fabs(x) - 1.0) <= 1e-12);
}

TEST_CASE("halfspace preconditions are enforced") {
    std::vector<Coeffs> box = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    CHECK_THROWS_AS(vertex_enumeration(box, 5), Error);
    CHECK_THROWS_AS(vertex_enumeration({{1, 0}, {0, 1}, {1}}, 2), Error);
}

}  // namespace
}  // namespace polyrenorm
