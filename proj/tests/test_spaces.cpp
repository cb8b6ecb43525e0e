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
#include <functional>

#include "oracles.hpp"
#include "polyrenorm/sampling.hpp"
#include "polyrenorm/space.hpp"

namespace polyrenorm {
namespace {

using testing::l2_reducing;
using testing::nakano_brute_force;

TEST_CASE("nakano modular matches the exhaustive supremum on the spec instances") {
    NakanoDescriptor d;
    d.families = {{1, 2}, {2, 3}};
    d.exponents = {1.0, 2.0};
    SparseVector x{{1, 0.5}, {2, 0.5}, {3, 0.5}};
    CHECK(nakano_brute_force(d, x) == 1.25);
    CHECK(nakano_modular(d, x) == 1.25);

    NakanoDescriptor d2;
    d2.families = {{1}, {1}};
    d2.exponents = {1.0, 2.0};
    SparseVector y{{1, 2.0}};
    CHECK(nakano_brute_force(d2, y) == 4.0);
    CHECK(nakano_modular(d2, y) == 4.0);

    CHECK(nakano_modular(d, SparseVector{}) == 0.0);
}

TEST_CASE("nakano modular rejects uncovered coordinates") {
    NakanoDescriptor d;
    d.families = {{1}};
    d.exponents = {1.0};
    CHECK_THROWS_WITH(nakano_modular(d, SparseVector::unit(2)),
                      Catch::Matchers::ContainsSubstring("uncovered coordinate"));
}

TEST_CASE("nakano greedy equals brute force on random instances") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        int nfam = rng.uniform_int(1, 4);
        NakanoDescriptor d;
        std::vector<double> exps;
        for (int n = 0; n < nfam; ++n) {
            std::set<int> fam;
            int size = rng.uniform_int(1, 4);
            for (int i = 0; i < size; ++i) fam.insert(rng.uniform_int(1, 6));
            d.families.push_back(fam);
            exps.push_back(rng.uniform(1.0, 4.0));
        }
        std::sort(exps.begin(), exps.end());
        d.exponents = exps;

        SparseVector x;
        for (int k = 1; k <= 6; ++k)
            if (d.covers(k) && rng.unit() < 0.7) x.set(k, rng.uniform(-1.5, 1.5));
        CHECK(std::fabs(nakano_modular(d, x) - nakano_brute_force(d, x)) <= 1e-12);
    }
}

TEST_CASE("nakano modular is convex on samples") {
    NakanoDescriptor d;
    d.families = {{1, 2}, {2, 3, 4}, {4, 5, 6}};
    d.exponents = {1.0, 2.0, 3.0};
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        SparseVector x, y;
        for (int k = 1; k <= 6; ++k) {
            if (rng.unit() < 0.7) x.set(k, rng.uniform(-1.5, 1.5));
            if (rng.unit() < 0.7) y.set(k, rng.uniform(-1.5, 1.5));
        }
        double mid = nakano_modular(d, 0.5 * (x + y));
        double avg = 0.5 * (nakano_modular(d, x) + nakano_modular(d, y));
        CHECK(mid <= avg + 1e-12);
    }
}

TEST_CASE("luxemburg norm reduces to closed forms") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space l2(l2_reducing(6), 6, tol);
    SparseVector x{{1, 3.0}, {2, 4.0}};
    CHECK_THAT(l2.norm(x), Catch::Matchers::WithinAbs(5.0, 1e-9));

    NakanoDescriptor lin;
    lin.families = {{1}};
    lin.exponents = {1.0};
    Space l1(lin, 1, tol);
    CHECK_THAT(l1.norm(SparseVector{{1, 2.0}}), Catch::Matchers::WithinAbs(2.0, 1e-9));

    OrliczDescriptor sq;
    sq.kind = OrliczKind::kPower;
    sq.p = 2.0;
    sq.K = 2.0;
    Space osq(sq, 6, tol);
    CHECK_THAT(osq.norm(x), Catch::Matchers::WithinAbs(5.0, 1e-9));

    CHECK(l2.norm(SparseVector{}) == 0.0);
}

TEST_CASE("luxemburg norm satisfies homogeneity and the triangle inequality") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space space(l2_reducing(6), 6, tol);
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        SparseVector x, y;
        for (int k = 1; k <= 6; ++k) {
            if (rng.unit() < 0.7) x.set(k, rng.uniform(-2.0, 2.0));
            if (rng.unit() < 0.7) y.set(k, rng.uniform(-2.0, 2.0));
        }
        if (x.empty() || y.empty()) continue;
        double alpha = rng.uniform(-3.0, 3.0);
        if (std::fabs(alpha) < 1e-3) continue;
        CHECK(std::fabs(space.norm(alpha * x) - std::fabs(alpha) * space.norm(x)) <= 1e-9);
        CHECK(space.norm(x + y) <= space.norm(x) + space.norm(y) + 1e-9);
    }
}

TEST_CASE("the modular evaluates to one on normalized vectors") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    std::vector<Space> spaces;
    spaces.emplace_back(testing::overlapping_blocks(), 8, tol);
    spaces.emplace_back(OrliczDescriptor{OrliczKind::kExpPatched, 2.0, 2.0}, 6, tol);
    for (const auto& space : spaces) {
        auto samples = sphere_samples(space, 50, 303, 6);
        for (const auto& u : samples)
            CHECK(std::fabs(space.modular(u) - 1.0) <= 1e-9);
    }
}

TEST_CASE("luxemburg norm rejects non-monotone modulars") {
    auto bogus = [](const SparseVector& y) { return std::fabs(std::sin(3.0 * y.at(1))); };
    CHECK_THROWS_WITH(luxemburg_norm(bogus, SparseVector{{1, 5.0}}),
                      Catch::Matchers::ContainsSubstring("invalid modular"));
}

TEST_CASE("orlicz limit check separates power from exponential growth") {
    OrliczDescriptor sq{OrliczKind::kPower, 2.0, 2.0};
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(0.5 * std::pow(0.02, i / 19.0));
    grid.back() = 0.01;
    auto res = orlicz_limit_check(sq, grid);
    CHECK_FALSE(res.passes);
    for (double r : res.ratios) CHECK(std::fabs(r - 4.0) <= 1e-12);

    OrliczDescriptor cube{OrliczKind::kPower, 3.0, 3.0};
    auto res3 = orlicz_limit_check(cube, grid);
    CHECK_FALSE(res3.passes);
    for (double r : res3.ratios) CHECK(std::fabs(r - 27.0) <= 1e-12);

    OrliczDescriptor expd{OrliczKind::kExpPatched, 2.0, 2.0};
    auto rese = orlicz_limit_check(expd, grid);
    CHECK(rese.passes);
    // At t = 0.01 the ratio is exp((1 - 1/K)/t) = e^50.
    CHECK_THAT(rese.min_ratio / std::exp(50.0), Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("orlicz d_n matches closed forms") {
    OrliczDescriptor expd{OrliczKind::kExpPatched, 2.0, 2.0};
    auto r100 = orlicz_dn(expd, 100);
    CHECK_THAT(r100.d_n, Catch::Matchers::WithinRel(10.0, 0.01));

    OrliczDescriptor sq{OrliczKind::kPower, 2.0, 2.0};
    auto rsq = orlicz_dn(sq, 7);
    CHECK_THAT(rsq.d_n, Catch::Matchers::WithinAbs(4.0, 1e-12));

    // For n = 4 the threshold M^{-1}(1/4) lies beyond the patch point, so the
    // ratio minimum sits on the affine branch: with t* solving M(t*) = 1/4,
    // the minimum is (8 t* - 1)/(4 t* - 1), not the small-t law n^{1-1/K}.
    auto r4 = orlicz_dn(expd, 4);
    double e2 = std::exp(-2.0);
    double t_star = 0.5 + (0.25 - e2) / (4.0 * e2);
    double expected = (8.0 * t_star - 1.0) / (4.0 * t_star - 1.0);
    CHECK_THAT(r4.t_max, Catch::Matchers::WithinAbs(t_star, 1e-10));
    CHECK_THAT(r4.d_n, Catch::Matchers::WithinAbs(expected, 1e-9));

    // Derived piece bounds stay strictly inside the admissible interval.
    for (auto* r : {&r100, &rsq, &r4}) {
        CHECK(r->b_n > 0.0);
        CHECK(r->b_n < (r->d_n - 1.0) / r->d_n);
    }
}

TEST_CASE("hereditary families validate closure and window") {
    CHECK_THROWS_WITH(HereditaryFamily(3, {{1, 2}}),
                      Catch::Matchers::ContainsSubstring("hereditary closure violated"));
    CHECK_THROWS_AS(HereditaryFamily(2, {{1, 5}, {1}, {5}}), Error);
    CHECK_NOTHROW(HereditaryFamily(3, {{1}, {2}, {3}}));
}

TEST_CASE("schreier strata have the expected sizes") {
    auto fam = HereditaryFamily::schreier(4);
    auto parts = strata(fam);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].cardinality == 0);
    CHECK(parts[0].members.size() == 1);
    CHECK(parts[1].members.size() == 4);
    CHECK(parts[2].members.size() == 3);
    std::set<Member> card2(parts[2].members.begin(), parts[2].members.end());
    CHECK(card2 == std::set<Member>{{2, 3}, {2, 4}, {3, 4}});

    auto singles = strata(HereditaryFamily::cardinality_at_most(5, 1));
    REQUIRE(singles.size() == 2);
    CHECK(singles[1].members.size() == 5);
}

TEST_CASE("hk norm is the exhaustive member maximum") {
    Space schreier(HereditaryFamily::schreier(10));
    SparseVector x = SparseVector::unit(1) + SparseVector::unit(2) + SparseVector::unit(3);
    auto res = hk_norm(schreier.family(), x);
    CHECK(res.value == 2.0);
    CHECK(res.attaining == Member{2, 3});

    Space sup(HereditaryFamily::cardinality_at_most(4, 1));
    CHECK(sup.norm(SparseVector{{1, -3.0}, {2, 2.0}}) == 3.0);
    CHECK(sup.norm(SparseVector{}) == 0.0);
}

TEST_CASE("hk norm is 1-unconditional") {
    Space schreier(HereditaryFamily::schreier(8));
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        SparseVector x, flipped;
        for (int k = 1; k <= 8; ++k) {
            if (rng.unit() < 0.6) {
                double v = rng.uniform(0.05, 2.0);
                x.set(k, v);
                flipped.set(k, rng.unit() < 0.5 ? -v : v);
            }
        }
        CHECK(schreier.norm(x) == schreier.norm(flipped));
    }
}

TEST_CASE("hk to C(K) bridge evaluates signed sums") {
    auto singles = HereditaryFamily::cardinality_at_most(3, 1);
    SparseVector x{{1, -0.5}, {2, 2.0}};
    auto res = hk_to_ck(singles, x);
    CHECK(res.sup_abs == 2.0);
    CHECK(res.values.at(Member{1}) == -0.5);

    auto schreier = HereditaryFamily::schreier(6);
    SparseVector y = SparseVector::unit(2) - SparseVector::unit(3);
    auto resy = hk_to_ck(schreier, y);
    CHECK(resy.values.at(Member{2, 3}) == 0.0);
    CHECK(resy.values.at(Member{2}) == 1.0);
    CHECK(resy.sup_abs == 1.0);
    CHECK(resy.distortion == 2.0);

    CHECK(hk_to_ck(schreier, SparseVector{}).sup_abs == 0.0);
}

TEST_CASE("norming functionals attain the norm inside the dual ball") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    Space l2(l2_reducing(4), 4, tol);
    SparseVector x{{1, 3.0}, {2, 4.0}};
    auto f = l2.norming_functional(x);
    CHECK_THAT(f.at(1), Catch::Matchers::WithinAbs(0.6, 1e-9));
    CHECK_THAT(f.at(2), Catch::Matchers::WithinAbs(0.8, 1e-9));

    Space schreier(HereditaryFamily::schreier(6));
    auto g = schreier.norming_functional(SparseVector::unit(1) + SparseVector::unit(2) +
                                         SparseVector::unit(3));
    CHECK(g == Functional{{2, 1.0}, {3, 1.0}});

    Space sup(HereditaryFamily::cardinality_at_most(4, 1));
    auto h = sup.norming_functional(SparseVector{{1, -3.0}, {2, 2.0}});
    CHECK(h == Functional{{1, -1.0}});

    CHECK_THROWS_AS(l2.norming_functional(SparseVector{}), Error);
}

TEST_CASE("norming functional witnesses verify on random samples") {
    ToleranceConfig tol;
    tol.bisect_tol = 1e-12;
    std::vector<Space> spaces;
    spaces.emplace_back(l2_reducing(6), 6, tol);
    spaces.emplace_back(HereditaryFamily::schreier(6), tol);
    spaces.emplace_back(OrliczDescriptor{OrliczKind::kExpPatched, 2.0, 2.0}, 6, tol);

    for (const auto& space : spaces) {
        auto samples = sphere_samples(space, 60, 404);
        for (const auto& u : samples) {
            auto f = space.norming_functional(u);
            CHECK(std::fabs(evaluate(f, u) - 1.0) <= 1e-8);
            CHECK(measured_dual_norm(f, samples) <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("piece suprema cover the spec cases") {
    Space schreier(HereditaryFamily::schreier(10));
    SparseVector x = SparseVector::unit(1) + SparseVector::unit(2) + SparseVector::unit(3);
    auto one = schreier.piece_sup(1, x, PieceMode::kSupportCard);
    CHECK(one.value == 1.0);
    CHECK(std::fabs(evaluate(one.witness, x)) == 1.0);

    auto full = schreier.piece_sup(3, x, PieceMode::kSupportCard);
    CHECK(full.value == schreier.norm(x));

    auto tail = schreier.piece_sup(10, x, PieceMode::kSchauder);
    CHECK(tail.value == schreier.norm(x));
}

TEST_CASE("piece suprema enforce the exhaustive-search cap") {
    NakanoDescriptor d;
    std::set<int> all;
    for (int i = 1; i <= 25; ++i) all.insert(i);
    d.families = {all};
    d.exponents = {2.0};
    Space space(d, 25);
    SparseVector x;
    for (int i = 1; i <= 21; ++i) x.set(i, 1.0);
    CHECK_THROWS_WITH(space.piece_sup(2, x, PieceMode::kSupportCard),
                      Catch::Matchers::ContainsSubstring("support too large"));
}

TEST_CASE("space rejects coordinates beyond the truncation window") {
    Space space(l2_reducing(3), 3);
    CHECK_THROWS_AS(space.norm(SparseVector::unit(4)), Error);
}

TEST_CASE("orlicz descriptor validation catches degenerate functions") {
    OrliczDescriptor bad{OrliczKind::kPower, 2.0, 0.5};  // K <= 1
    CHECK_THROWS_AS(bad.validate(), Error);
    OrliczDescriptor ok{OrliczKind::kExpPatched, 2.0, 2.0};
    CHECK_NOTHROW(ok.validate());
}

}  // namespace
}  // namespace polyrenorm
