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

#include "polyrenorm/core.hpp"
#include "polyrenorm/sampling.hpp"

namespace polyrenorm {
namespace {

SparseVector random_vector(Rng& rng, int window, int max_support) {
    SparseVector x;
    int supp = rng.uniform_int(1, max_support);
    for (int i = 0; i < supp; ++i)
        x.set(rng.uniform_int(1, window), rng.uniform(-2.0, 2.0));
    return x;
}

Functional random_functional(Rng& rng, int window, int max_support) {
    Functional f;
    int supp = rng.uniform_int(1, max_support);
    for (int i = 0; i < supp; ++i)
        f.set(rng.uniform_int(1, window), rng.uniform(-2.0, 2.0));
    return f;
}

TEST_CASE("evaluate pairs functionals with vectors") {
    CHECK(evaluate(Functional::unit(1), SparseVector::unit(1)) == 1.0);

    Functional f{{1, 2.0}, {2, 1.0}};
    SparseVector x{{1, 1.0}, {2, -1.0}};
    CHECK(evaluate(f, x) == 1.0);

    CHECK(evaluate(Functional{}, x) == 0.0);
}

TEST_CASE("evaluate is bilinear") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto f = random_functional(rng, 8, 5);
        auto g = random_functional(rng, 8, 5);
        auto x = random_vector(rng, 8, 5);
        double alpha = rng.uniform(-3.0, 3.0);
        double beta = rng.uniform(-3.0, 3.0);
        Functional combo = alpha * f + beta * g;
        double lhs = evaluate(combo, x);
        double rhs = alpha * evaluate(f, x) + beta * evaluate(g, x);
        CHECK(std::fabs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("support is the stored key set") {
    SparseVector x{{2, 3.0}, {4, -2.0}};
    CHECK(support(x) == std::set<int>{2, 4});
    CHECK(support(SparseVector{}).empty());
    CHECK(support(SparseVector::unit(5)) == std::set<int>{5});

    SparseVector y{{1, 1.0}};
    y.set(1, 0.0);  // writing a zero erases the entry
    CHECK(y.empty());
}

TEST_CASE("coordinate indices below one are rejected") {
    SparseVector x;
    CHECK_THROWS_AS(x.set(0, 1.0), Error);
}

TEST_CASE("rearrangement orders by decreasing magnitude with index ties") {
    SparseVector x{{1, 0.5}, {2, 0.9}, {3, 0.5}};
    CHECK(rearrangement_map(x) == std::vector<int>{2, 1, 3});

    SparseVector tie{{1, 0.5}, {2, 0.5}};
    CHECK(rearrangement_map(tie) == std::vector<int>{1, 2});

    SparseVector single{{7, -3.0}};
    CHECK(rearrangement_map(single) == std::vector<int>{7});
}

TEST_CASE("rearrangement is a permutation of the support") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random_vector(rng, 10, 6);
        auto order = rearrangement_map(x);
        CHECK(std::set<int>(order.begin(), order.end()) == support(x));
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
            CHECK(std::fabs(x.at(order[i])) >= std::fabs(x.at(order[i + 1])));
    }
}

TEST_CASE("head_set takes the largest coordinates") {
    SparseVector x{{1, 0.5}, {2, 0.9}, {3, 0.5}};
    CHECK(head_set(x, 2) == std::set<int>{1, 2});
    CHECK(head_set(x, 0).empty());
    CHECK(head_set(x, 10) == support(x));
}

TEST_CASE("projection restricts to a coordinate set") {
    SparseVector x{{1, 1.0}, {2, 2.0}};
    CHECK(project(x, {2}) == SparseVector{{2, 2.0}});
    CHECK(project(x, {}).empty());
    CHECK(tail_projection(x, 1) == SparseVector{{2, 2.0}});
    CHECK(project(x, support(x)) == x);
}

TEST_CASE("projection composes by intersection") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random_vector(rng, 10, 6);
        std::set<int> sigma, tau, inter;
        for (int k = 1; k <= 10; ++k) {
            if (rng.unit() < 0.5) sigma.insert(k);
            if (rng.unit() < 0.5) tau.insert(k);
        }
        for (int k : sigma)
            if (tau.count(k)) inter.insert(k);
        CHECK(project(project(x, sigma), tau) == project(x, inter));
    }
}

TEST_CASE("text serialization round trips") {
    SparseVector x{{1, 0.5}, {3, -2.25}};
    CHECK(x.to_text() == "1:0.5,3:-2.25");
    CHECK(SparseVector::parse(x.to_text()) == x);
    CHECK_THROWS_AS(SparseVector::parse("nonsense"), Error);

    Functional f{{2, 1.5}};
    CHECK(Functional::parse(f.to_text()) == f);
}

TEST_CASE("tolerance config validates") {
    ToleranceConfig bad;
    bad.eq_tol = 1e-12;  // below bisect_tol
    CHECK_THROWS_AS(bad.validate(), Error);
    ToleranceConfig good;
    CHECK_NOTHROW(good.validate());
}

}  // namespace
}  // namespace polyrenorm
