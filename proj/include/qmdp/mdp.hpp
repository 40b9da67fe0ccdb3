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

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "qmdp/kappa.hpp"
#include "qmdp/rational.hpp"
#include "qmdp/series.hpp"

namespace qmdp {

using StateId = std::size_t;
using ControlId = int;

/// Per-state series vector.
using ValueFunction = std::vector<Series>;
/// Per-state control id.
using Policy = std::vector<ControlId>;

/// A transition row is either known only up to a kappa ranking over next
/// states or given explicitly as a qualitative distribution.
using TransitionSpec = std::variant<KappaRanking, QualitativeDistribution>;

struct Action {
    ControlId control = 0;
    Series cost;
    TransitionSpec transition;
};

/// Qualitative MDP. Control ids are global so that the same control can be
/// offered in several states; actions[i] lists U(i) in ascending control id.
struct QmdpModel {
    std::vector<std::vector<Action>> actions;
    Rational discount = make_rational(1, 2);
    int max_degree = kDefaultMaxDegree;
    /// Absorbing zero-cost anchor states, used by the order-of-magnitude
    /// fixpoint in baseline.hpp.
    std::vector<StateId> goals;

    std::size_t num_states() const noexcept { return actions.size(); }
};

/// Throws Error{model_validation} naming the first broken invariant.
void validate(const QmdpModel& model);

/// True when every transition row is an explicit distribution.
bool is_resolved(const QmdpModel& model);

/// Replaces every kappa row by its embedding; explicit rows are validated and
/// passed through.
QmdpModel resolve(const QmdpModel& model);

/// Sparse form consumed by the dynamic-programming routines. Outcomes may
/// repeat a successor (belief MDPs route several observations to one belief).
struct Outcome {
    std::size_t next = 0;
    Series prob;
};

struct Choice {
    ControlId control = 0;
    Series cost;
    std::vector<Outcome> outcomes;
};

struct CompiledMdp {
    std::vector<std::vector<Choice>> choices;
    Rational discount;
    int max_degree = kDefaultMaxDegree;

    std::size_t size() const noexcept { return choices.size(); }
};

/// Requires a resolved model; zero masses are dropped.
CompiledMdp compile(const QmdpModel& model);

/// g(i,u) + discount * sum_j P(j) J(j).
Series q_value(const CompiledMdp& mdp, const Choice& choice, const ValueFunction& j);

/// (TJ)(i) = min over controls of q_value, minimum taken under the series order.
ValueFunction bellman_apply(const CompiledMdp& mdp, const ValueFunction& j);
ValueFunction bellman_apply(const QmdpModel& model, const ValueFunction& j);

/// Control with the smallest q_value; ties go to the lowest control id.
Policy greedy_policy(const CompiledMdp& mdp, const ValueFunction& j);
Policy greedy_policy(const QmdpModel& model, const ValueFunction& j);

/// max_i ||a(i) - b(i)||_rho.
Rational distance(const ValueFunction& a, const ValueFunction& b, const Rational& rho);

/// discount * max over rows of sum_outcomes ||prob||_rho.
Rational contraction_coefficient(const CompiledMdp& mdp, const Rational& rho);

struct RhoChoice {
    Rational rho;
    Rational gamma;
};

/// First rho in 2, 4, 8, ... whose contraction coefficient is below 1.
RhoChoice choose_rho(const CompiledMdp& mdp);
RhoChoice choose_rho(const QmdpModel& model);

enum class StopReason { tolerance, exact, max_iter };

struct ViResult {
    ValueFunction values;
    int iterations = 0;
    Rational residual;
    Rational rho;
    Rational gamma;
    StopReason stop = StopReason::max_iter;
    /// Residual after each sweep, in order.
    std::vector<Rational> residuals;

    bool converged() const noexcept { return stop != StopReason::max_iter; }
};

inline Rational default_tolerance() { return make_rational(1, 1000000000); }

/// All-zero vector of the right size.
ValueFunction zero_values(std::size_t n, int max_degree);

/// Value iteration J_{k+1} = T J_k, stopping once the rho-norm residual drops
/// to tol, on exact equality of consecutive iterates, or after max_iter
/// sweeps (reported through `stop`; the last iterate is returned either way).
ViResult value_iterate(const CompiledMdp& mdp, const ValueFunction& j0, const Rational& tol, int max_iter);
ViResult value_iterate(const QmdpModel& model, const ValueFunction& j0, const Rational& tol, int max_iter);

/// gamma / (1 - gamma) * residual.
Rational suboptimality_bound(const Rational& gamma, const Rational& residual);
Rational suboptimality_bound(const QmdpModel& model, const Rational& residual, const Rational& rho);

inline constexpr long long kMaxTrajectories = 10'000'000;

/// Expected discounted cost over all N-stage trajectories that follow the
/// policy from `start`, summing P(tau) * g(tau) by explicit enumeration.
/// Throws Error{oracle_too_large} when the trajectory count exceeds
/// kMaxTrajectories.
Series trajectory_expected_cost(const QmdpModel& model, const Policy& policy, StateId start, int horizon);

}  // namespace qmdp
