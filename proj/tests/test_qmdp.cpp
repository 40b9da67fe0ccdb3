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
#include "qmdp/mdp.hpp"

namespace qmdp {

using testing::Gen;

namespace {

const Rank inf = Rank::infinity();

Series S(std::string_view text, int degree = kDefaultMaxDegree) { return parse_series(text, degree); }

Rational R(long p, long q = 1) { return make_rational(p, q); }

// State 0 = s1 with controls a and b, state 1 = absorbing goal.
QmdpModel two_state() {
    QmdpModel m;
    m.actions = {
        {{0, S("1"), KappaRanking{1, 0}}, {1, S("1"), KappaRanking{0, 1}}},
        {{0, S("0"), KappaRanking{inf, 0}}},
    };
    m.goals = {1};
    return m;
}

Series geometric_half(int degree) {
    std::vector<Series::Term> terms;
    for (int k = 0; k <= degree; ++k) terms.emplace_back(k, pow(R(1, 2), k));
    return Series::from_terms(terms, degree);
}

// The model restricted to the controls of mu.
QmdpModel restrict_to(const QmdpModel& m, const Policy& mu) {
    QmdpModel out = m;
    for (StateId i = 0; i < m.num_states(); ++i)
        for (const auto& a : m.actions[i])
            if (a.control == mu[i]) out.actions[i] = {a};
    return out;
}

}  // namespace

TEST_CASE("resolving kappa rows", "[qmdp]") {
    QmdpModel m = resolve(two_state());
    CHECK(is_resolved(m));
    const auto& row = std::get<QualitativeDistribution>(m.actions[0][0].transition);
    CHECK(row.masses == std::vector<Series>{S("e"), S("1 - e")});
    CHECK(std::get<QualitativeDistribution>(m.actions[1][0].transition).masses == std::vector<Series>{Series(16), S("1")});

    QmdpModel bad = two_state();
    bad.actions[0][0].transition = KappaRanking{1, 2};
    CHECK_THROWS_AS(resolve(bad), Error);

    QmdpModel unnormalized = two_state();
    unnormalized.actions[0][0].transition = QualitativeDistribution{{S("e"), S("1 - 2*e")}, 16};
    CHECK_THROWS_AS(validate(unnormalized), Error);

    QmdpModel discount = two_state();
    discount.discount = 1;
    CHECK_THROWS_AS(validate(discount), Error);
}

TEST_CASE("one Bellman sweep", "[qmdp]") {
    const QmdpModel m = resolve(two_state());
    CHECK(bellman_apply(m, {S("0"), S("0")}) == ValueFunction{S("1"), S("0")});
    CHECK(bellman_apply(m, {S("1"), S("0")}) == ValueFunction{S("1 + 1/2*e"), S("0")});
    CHECK(bellman_apply(m, {S("7 + e^-1"), S("0")})[1] == S("0"));
}

TEST_CASE("greedy policy", "[qmdp]") {
    const CompiledMdp mdp = compile(resolve(two_state()));
    const ValueFunction j{S("1"), S("0")};
    CHECK(q_value(mdp, mdp.choices[0][0], j) == S("1 + 1/2*e"));
    CHECK(q_value(mdp, mdp.choices[0][1], j) == S("3/2 - 1/2*e"));
    CHECK(greedy_policy(mdp, j) == Policy{0, 0});

    QmdpModel twins = two_state();
    twins.actions[0][1] = twins.actions[0][0];
    twins.actions[0][1].control = 1;
    CHECK(greedy_policy(resolve(twins), j) == Policy{0, 0});
}

TEST_CASE("choosing rho", "[qmdp]") {
    RhoChoice c = choose_rho(resolve(two_state()));
    CHECK(c.rho == 4);
    CHECK(c.gamma == R(3, 4));

    QmdpModel det;
    det.discount = R(3, 4);
    det.actions = {{{0, S("1"), KappaRanking{inf, 0}}}, {{0, S("1"), KappaRanking{0, inf}}}};
    c = choose_rho(resolve(det));
    CHECK(c.rho == 2);
    CHECK(c.gamma == R(3, 4));

    QmdpModel slow = two_state();
    slow.discount = R(9, 10);
    c = choose_rho(resolve(slow));
    CHECK(c.rho == 32);
    CHECK(c.gamma == R(9, 10) * (1 + R(2, 32)));
}

TEST_CASE("value iteration", "[qmdp]") {
    SECTION("a single self-loop converges to 1 / (1 - discount)") {
        QmdpModel m;
        m.actions = {{{0, S("1"), KappaRanking{0}}}};
        ViResult r = value_iterate(resolve(m), zero_values(1, 16), default_tolerance(), 1000);
        CHECK(r.converged());
        CHECK(r.values[0].order() == 0);
        CHECK(abs(Rational(r.values[0].coeff(0) - 2)) <= default_tolerance());
    }
    SECTION("the two-state model reaches the geometric series exactly") {
        ViResult r = value_iterate(resolve(two_state()), zero_values(2, 16), R(1, 1000000000) / 1000000000 / 1000000000, 1000);
        CHECK(r.stop == StopReason::exact);
        CHECK(r.values == ValueFunction{geometric_half(16), S("0")});
        CHECK(r.rho == 4);
    }
    SECTION("the default tolerance leaves a certified gap") {
        const QmdpModel m = resolve(two_state());
        ViResult r = value_iterate(m, zero_values(2, 16), default_tolerance(), 1000);
        CHECK(r.stop == StopReason::tolerance);
        CHECK(r.residual <= default_tolerance());
        CHECK(distance(r.values, {geometric_half(16), S("0")}, r.rho) <= suboptimality_bound(r.gamma, r.residual));
    }
    SECTION("a huge tolerance stops after one sweep") {
        const QmdpModel m = resolve(two_state());
        ViResult r = value_iterate(m, zero_values(2, 16), R(1000000), 1000);
        CHECK(r.iterations == 1);
        CHECK(r.values == bellman_apply(m, zero_values(2, 16)));
    }
    SECTION("an exhausted budget is reported, not thrown") {
        ViResult r = value_iterate(resolve(two_state()), zero_values(2, 16), R(1, 1000000000), 2);
        CHECK_FALSE(r.converged());
        CHECK(r.iterations == 2);
        CHECK(r.values[0] == S("1 + 1/2*e"));
    }
}

TEST_CASE("suboptimality bound", "[qmdp]") {
    CHECK(suboptimality_bound(R(3, 4), 0) == 0);
    CHECK(suboptimality_bound(R(3, 4), R(1, 7)) == R(3, 7));
    CHECK(suboptimality_bound(R(1, 2), R(1, 1000)) == R(1, 1000));
}

TEST_CASE("trajectory oracle", "[qmdp]") {
    const QmdpModel m = resolve(two_state());
    CHECK(trajectory_expected_cost(m, {0, 0}, 0, 2) == S("1 + 1/2*e"));
    CHECK(trajectory_expected_cost(m, {1, 0}, 0, 1) == S("1"));
    for (int n = 1; n <= 6; ++n) CHECK(trajectory_expected_cost(m, {0, 0}, 1, n).is_zero());

    // 3^15 paths through a fully connected model exceed the enumeration cap.
    QmdpModel wide;
    wide.actions.assign(3, {{0, S("1"), KappaRanking{0, 0, 0}}});
    CHECK_THROWS_AS(trajectory_expected_cost(resolve(wide), {0, 0, 0}, 0, 15), Error);
}

TEST_CASE("an argmin flip can expand the rho-distance", "[qmdp]") {
    // s0 chooses between two zero-cost absorbing states.
    QmdpModel m;
    m.discount = R(1, 2);
    m.max_degree = 8;
    m.actions = {
        {{0, S("0", 8), KappaRanking{inf, 0, inf}}, {1, S("0", 8), KappaRanking{inf, inf, 0}}},
        {{0, S("0", 8), KappaRanking{inf, 0, inf}}},
        {{0, S("0", 8), KappaRanking{inf, inf, 0}}},
    };
    m = resolve(m);
    const RhoChoice c = choose_rho(m);
    REQUIRE(c.rho == 2);
    REQUIRE(c.gamma == R(1, 2));
    const ValueFunction j{S("0", 8), S("0", 8), S("2000*e^3", 8)};
    const ValueFunction h{S("0", 8), S("2*e^2", 8), S("2000*e^3", 8)};
    CHECK(distance(j, h, c.rho) == R(1, 2));
    CHECK(distance(bellman_apply(m, j), bellman_apply(m, h), c.rho) == 125);
    for (const Policy& mu : {Policy{0, 0, 0}, Policy{1, 0, 0}}) {
        const QmdpModel fixed = restrict_to(m, mu);
        CHECK(distance(bellman_apply(fixed, j), bellman_apply(fixed, h), c.rho) <= c.gamma * distance(j, h, c.rho));
    }
}

TEST_CASE("fixed-point residual after convergence", "[qmdp][property]") {
    Gen g(31);
    for (int trial = 0; trial < 40; ++trial) {
        const CompiledMdp mdp = compile(g.qmdp(4, 3, 2, 6));
        ViResult r = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), default_tolerance(), 5000);
        REQUIRE(r.converged());
        CHECK(distance(bellman_apply(mdp, r.values), r.values, r.rho) <= default_tolerance());
    }
}

TEST_CASE("trajectory enumeration matches repeated policy sweeps", "[qmdp][property]") {
    Gen g(37);
    for (int trial = 0; trial < 40; ++trial) {
        const QmdpModel m = g.qmdp(3, 2, 2, 6);
        Policy mu;
        for (const auto& acts : m.actions) mu.push_back(g.pick(acts).control);
        const QmdpModel fixed = restrict_to(m, mu);
        ValueFunction j = zero_values(m.num_states(), m.max_degree);
        for (int n = 1; n <= 4; ++n) {
            j = bellman_apply(fixed, j);
            for (StateId i = 0; i < m.num_states(); ++i) CHECK(trajectory_expected_cost(m, mu, i, n) == j[i]);
        }
    }
}

TEST_CASE("trajectory costs approach the policy value geometrically", "[qmdp][property]") {
    Gen g(41);
    for (int trial = 0; trial < 20; ++trial) {
        const QmdpModel m = g.qmdp(3, 2, 2, 6);
        Policy mu;
        for (const auto& acts : m.actions) mu.push_back(g.pick(acts).control);
        const QmdpModel fixed = restrict_to(m, mu);
        const Rational tol = R(1, 1000000000) / 1000000000;
        ViResult r = value_iterate(fixed, zero_values(m.num_states(), m.max_degree), tol, 10000);
        REQUIRE(r.converged());
        const Rational slack = suboptimality_bound(r.gamma, r.residual);
        const Rational scale = distance(r.values, zero_values(m.num_states(), m.max_degree), r.rho) + slack;
        Rational gamma_n = 1;
        for (int n = 1; n <= 5; ++n) {
            gamma_n *= r.gamma;
            for (StateId i = 0; i < m.num_states(); ++i)
                CHECK(norm(trajectory_expected_cost(m, mu, i, n) - r.values[i], r.rho) <= gamma_n * scale + slack);
        }
    }
}

TEST_CASE("greedy choice ignores a common positive cost scale", "[qmdp][property]") {
    Gen g(43);
    for (int trial = 0; trial < 60; ++trial) {
        QmdpModel m = g.qmdp(4, 3, 2, 6);
        ValueFunction j = g.values(m.num_states(), m.max_degree);
        const Rational q = g.positive_rational();
        QmdpModel scaled = m;
        for (auto& acts : scaled.actions)
            for (auto& a : acts) a.cost = scale(q, a.cost);
        ValueFunction scaled_j;
        for (const auto& v : j) scaled_j.push_back(scale(q, v));
        CHECK(greedy_policy(m, j) == greedy_policy(scaled, scaled_j));
    }
}

}  // namespace qmdp
