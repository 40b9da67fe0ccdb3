// Copyright 2026 The qmdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catch2/catch_amalgamated.hpp"
#include "generators.hpp"
#include "qmdp/error.hpp"
#include "qmdp/kappa.hpp"

namespace qmdp {

using testing::Gen;

namespace {

const Rank inf = Rank::infinity();

Series S(std::string_view text, int degree = kDefaultMaxDegree) { return parse_series(text, degree); }

Series total(const QualitativeDistribution& d) {
    Series sum(d.max_degree);
    for (const auto& m : d.masses) sum += m;
    return sum;
}

// N_k straight from its definition: N_0 = 1 and N_k sums N_j over occupied
// ranks j < k, evaluated for every k up to the largest rank.
std::map<int, Integer> counts_by_definition(const KappaRanking& k) {
    int top = 0;
    std::vector<bool> occupied;
    for (const auto& r : k.ranks)
        if (r.is_finite()) top = std::max(top, r.value());
    occupied.assign(static_cast<std::size_t>(top) + 1, false);
    for (const auto& r : k.ranks)
        if (r.is_finite()) occupied[static_cast<std::size_t>(r.value())] = true;
    std::vector<Integer> big(static_cast<std::size_t>(top) + 1, 0);
    big[0] = 1;
    for (int m = 1; m <= top; ++m)
        for (int j = 0; j < m; ++j)
            if (occupied[static_cast<std::size_t>(j)]) big[static_cast<std::size_t>(m)] += big[static_cast<std::size_t>(j)];
    std::map<int, Integer> out;
    for (int m = 0; m <= top; ++m)
        if (occupied[static_cast<std::size_t>(m)]) out[m] = big[static_cast<std::size_t>(m)];
    return out;
}

}  // namespace

TEST_CASE("ranking validation", "[kappa]") {
    CHECK_FALSE(validate_kappa({0, 1}).has_value());
    CHECK(validate_kappa({1, 2}).has_value());
    CHECK_FALSE(validate_kappa({0, inf}).has_value());
    CHECK(validate_kappa({inf, inf}).has_value());
    CHECK(validate_kappa({0, -1}).has_value());
    CHECK(validate_kappa(KappaRanking{}).has_value());
}

TEST_CASE("rank counts", "[kappa]") {
    RankCounts c = compute_counts({0, 0, 1, 1, 5});
    CHECK(c.n == std::map<int, int>{{0, 2}, {1, 2}, {5, 1}});
    CHECK(c.big_n == std::map<int, Integer>{{0, 1}, {1, 1}, {5, 2}});

    c = compute_counts({0, 0, 0});
    CHECK(c.n == std::map<int, int>{{0, 3}});
    CHECK(c.big_n == std::map<int, Integer>{{0, 1}});

    c = compute_counts({0, 1});
    CHECK(c.n == std::map<int, int>{{0, 1}, {1, 1}});
    CHECK(c.big_n == std::map<int, Integer>{{0, 1}, {1, 1}});

    Gen g(3);
    for (int trial = 0; trial < 300; ++trial) {
        KappaRanking k = g.ranking(static_cast<std::size_t>(g.uniform(1, 8)), 10);
        CHECK(compute_counts(k).big_n == counts_by_definition(k));
    }
}

TEST_CASE("embedding of worked rankings", "[kappa]") {
    GIVEN("the ranking {a:0, b:0, c:1, d:1, e:5}") {
        QualitativeDistribution z = embed({0, 0, 1, 1, 5}, 16);
        THEN("masses follow the closed form and sum to one") {
            CHECK(z[0] == S("1/2 - 1/2*e - 1/2*e^5"));
            CHECK(z[1] == S("1/2 - 1/2*e - 1/2*e^5"));
            CHECK(z[2] == S("1/2*e - 1/2*e^5"));
            CHECK(z[3] == S("1/2*e - 1/2*e^5"));
            CHECK(z[4] == S("2*e^5"));
            CHECK(total(z) == S("1"));
        }
    }
    CHECK(embed({0, 0, 0, 0}).masses == std::vector<Series>(4, S("1/4")));
    CHECK(embed({0, 1}).masses == std::vector<Series>{S("1 - e"), S("e")});
    CHECK(embed({inf, 0}).masses == std::vector<Series>{Series(16), S("1")});
    CHECK(embed({0, 2}, 2).masses == std::vector<Series>{S("1 - e^2", 2), S("e^2", 2)});
}

TEST_CASE("embedding rejects what it cannot represent", "[kappa]") {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::internal;
    };
    CHECK(code([] { (void)embed({0, 5}, 4); }) == Errc::truncation_too_small);
    CHECK(code([] { (void)embed({1, 2}); }) == Errc::model_validation);
}

TEST_CASE("order of a distribution", "[kappa]") {
    QualitativeDistribution d{{S("1 - e"), S("e")}, 16};
    CHECK(order_of(d) == KappaRanking{0, 1});
    CHECK(order_of(embed({0, 0, 0})) == KappaRanking{0, 0, 0});
    CHECK(order_of(QualitativeDistribution{{S("1"), Series(16)}, 16}) == KappaRanking{0, inf});
}

TEST_CASE("distribution validation", "[kappa]") {
    CHECK_FALSE(validate_distribution({{S("1 - e"), S("e")}, 16}).has_value());
    CHECK(validate_distribution({{S("1 - e"), S("-e")}, 16}).has_value());
    CHECK(validate_distribution({{S("1 - e")}, 16}).has_value());
    CHECK(validate_distribution({{S("1", 8)}, 16}).has_value());
}

TEST_CASE("embedding properties on random rankings", "[kappa][property]") {
    Gen g(17);
    for (int trial = 0; trial < 500; ++trial) {
        const auto size = static_cast<std::size_t>(g.uniform(1, 8));
        KappaRanking k = g.ranking(size, 10);
        QualitativeDistribution z = embed(k, 16);
        CHECK(total(z) == Series::constant(1, 16));
        CHECK(order_of(z) == k);
        CHECK_FALSE(validate_distribution(z).has_value());
        for (std::size_t i = 0; i < size; ++i) {
            if (k[i].is_finite()) CHECK(z[i].leading_coeff() > 0);
            for (std::size_t j = 0; j < size; ++j)
                if (k[i] == k[j]) CHECK(z[i] == z[j]);
        }
    }
}

}  // namespace qmdp
