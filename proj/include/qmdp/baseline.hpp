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

// Numeric reference machinery: ordinary MDPs over exact rationals obtained by
// substituting a concrete epsilon, Bayesian belief updates, and the raw
// order-of-magnitude Bellman recursion. Everything here exists to cross-check
// the series-valued solvers.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qmdp/error.hpp"
#include "qmdp/mdp.hpp"
#include "qmdp/pomdp.hpp"
#include "qmdp/rational.hpp"

namespace qmdp {

struct NumericAction {
    ControlId control = 0;
    Rational cost;
    std::vector<Rational> transition;  // dense over next states
};

struct NumericMdp {
    std::vector<std::vector<NumericAction>> actions;
    Rational discount;

    std::size_t num_states() const noexcept { return actions.size(); }
};

/// Evaluates every series of a resolved model at eps0. Throws
/// Error{epsilon_too_large} when some mass leaves [0, 1].
NumericMdp instantiate(const QmdpModel& model, const Rational& eps0);

struct NumericSolution {
    std::vector<Rational> values;
    Policy policy;
    int iterations = 0;
    Rational residual;
    bool converged = false;
};

/// Exact rational value iteration from J = 0 with residual
/// max_i |J_{k+1}(i) - J_k(i)| <= tol; greedy policy breaks ties by lowest id.
NumericSolution numeric_value_iterate(const NumericMdp& m, const Rational& tol, int max_iter);

/// POMDP rows over any ordered field (Rational for the numeric oracle, Series
/// for the qualitative one). Rows are indexed [state][control id]; an empty
/// optional means the control is not defined there.
template <typename T>
struct PomdpRows {
    std::size_t num_states = 0;
    std::size_t num_observations = 0;
    std::vector<std::vector<std::optional<std::vector<T>>>> transition;   // p_{i,u}(j)
    std::vector<std::vector<std::optional<std::vector<T>>>> observation;  // p_{i,u}(o), i the entered state
};

template <typename T>
struct BayesResult {
    std::vector<T> predicted;  // x_u
    T obs_prob;                // p_{x,u}(o)
    std::vector<T> posterior;  // x_u^o
};

/// Qualitative rows: every kappa ranking of the model replaced by its embedding.
PomdpRows<Series> embed_rows(const QpomdpModel& model);

/// Numeric rows obtained by evaluating embedded rows at eps0.
PomdpRows<Rational> instantiate(const PomdpRows<Series>& rows, const Rational& eps0);

namespace detail {
inline Rational divide(const Rational& a, const Rational& b) { return a / b; }
inline Series divide(const Series& a, const Series& b) { return a * inverse(b); }
inline bool is_zero(const Rational& a) { return a == 0; }
inline bool is_zero(const Series& a) { return a.is_zero(); }
}  // namespace detail

/// Bayesian belief update:
///   x_u(i)     = sum_j x(j) p_{j,u}(i)
///   p_{x,u}(o) = sum_i x_u(i) p_{i,u}(o)
///   x_u^o(i)   = x_u(i) p_{i,u}(o) / p_{x,u}(o)
/// `zero` supplies the additive identity of the field (carries the series
/// truncation degree). Throws Error{impossible_observation} when p_{x,u}(o) = 0.
template <typename T>
BayesResult<T> bayes_update(const PomdpRows<T>& rows, const std::vector<T>& x, ControlId u, std::size_t o,
                            const T& zero) {
    const std::size_t n = rows.num_states;
    BayesResult<T> out{std::vector<T>(n, zero), zero, std::vector<T>(n, zero)};
    for (std::size_t j = 0; j < n; ++j) {
        if (detail::is_zero(x[j])) continue;
        const auto& row = rows.transition[j][static_cast<std::size_t>(u)];
        if (!row) throw Error(Errc::inapplicable_control, "control undefined in a state of positive belief");
        for (std::size_t i = 0; i < n; ++i) out.predicted[i] += x[j] * (*row)[i];
    }
    std::vector<T> joint(n, zero);
    for (std::size_t i = 0; i < n; ++i) {
        if (detail::is_zero(out.predicted[i])) continue;
        const auto& row = rows.observation[i][static_cast<std::size_t>(u)];
        if (!row) throw Error(Errc::model_validation, "no observation row for a reachable state");
        joint[i] = out.predicted[i] * (*row)[o];
        out.obs_prob += joint[i];
    }
    if (detail::is_zero(out.obs_prob))
        throw Error(Errc::impossible_observation, "observation has zero probability");
    for (std::size_t i = 0; i < n; ++i)
        if (!detail::is_zero(joint[i])) out.posterior[i] = detail::divide(joint[i], out.obs_prob);
    return out;
}

struct AgreementResult {
    Rational eps0;
    Policy numeric_policy;
    Policy qualitative_policy;
    int halvings = 0;
    bool agreed = false;
};

/// Probes eps0 = 1/4, 1/8, ... until two consecutive probes give the same
/// numeric greedy policy; reports the first probe of that pair. Probes where
/// some mass leaves [0, 1] are skipped. `agreed` is false when max_halvings
/// runs out first.
AgreementResult find_agreement_epsilon(const QmdpModel& model, const Rational& tol, int max_halvings = 20,
                                       int max_iter = 100000);

/// Fixpoint of J(i) = min_u max{ g(i,u)°, max_j (P_{i,u}(j)° + J(j)) } where
/// j ranges over successors of finite order. Goal states stay at 0; every
/// other state starts at infinity and finite values are capped at kappa_cap.
std::vector<Rank> oom_bellman_fixpoint(const QmdpModel& model, int kappa_cap = kDefaultKappaCap);

}  // namespace qmdp
