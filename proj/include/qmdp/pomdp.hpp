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
#include <map>
#include <utility>
#include <vector>

#include "qmdp/kappa.hpp"
#include "qmdp/mdp.hpp"

namespace qmdp {

inline constexpr int kDefaultKappaCap = 12;

struct PomdpAction {
    ControlId control = 0;
    Series cost;
    KappaRanking transition;  // psi over next states
};

/// Qualitative POMDP given as an order-of-magnitude specification: transition
/// and observation probabilities are known only through kappa rankings.
///
/// observation[{i, u}] ranks the observations received when control u leads
/// into state i. It must exist for every state that u can lead into.
struct QpomdpModel {
    std::vector<std::vector<PomdpAction>> actions;
    std::size_t num_observations = 0;
    std::map<std::pair<StateId, ControlId>, KappaRanking> observation;
    Rational discount = make_rational(1, 2);
    int max_degree = kDefaultMaxDegree;
    int kappa_cap = kDefaultKappaCap;

    std::size_t num_states() const noexcept { return actions.size(); }
    const PomdpAction* find_action(StateId state, ControlId control) const;
};

/// A kappa ranking over states with minimum 0 and finite ranks <= kappa_cap.
using KappaBelief = KappaRanking;

void validate(const QpomdpModel& model);

/// Checks normalization and the rank cap; throws Error{model_validation}.
void validate_belief(const QpomdpModel& model, const KappaBelief& k);

/// Controls available in every state of finite rank. Empty means dead end.
std::vector<ControlId> controls_for(const QpomdpModel& model, const KappaBelief& k);

/// k_u(i) = min_j [k(j) + psi_{j,u}(i)].
KappaRanking predict(const QpomdpModel& model, const KappaBelief& k, ControlId u);

/// k^u(o) = min_i [k_u(i) + theta_{i,u}(o)] over states of finite predicted rank.
KappaRanking obs_rank(const QpomdpModel& model, const KappaRanking& k_u, ControlId u);

/// k_u^o(i) = k_u(i) + theta_{i,u}(o) - k^u(o), finite ranks clamped at kappa_cap.
/// Throws Error{impossible_observation} when k^u(o) is infinite.
KappaBelief update(const QpomdpModel& model, const KappaBelief& k, ControlId u, std::size_t o);

/// Same as update() but also reports whether the clamp changed any rank.
std::pair<KappaBelief, bool> update_with_clamp(const QpomdpModel& model, const KappaBelief& k, ControlId u,
                                               std::size_t o);

/// sum_i g(i,u) zeta_k(i).
Series belief_cost(const QpomdpModel& model, const KappaBelief& k, ControlId u);

struct BeliefTransition {
    std::size_t observation = 0;
    std::size_t successor = 0;
    Series prob;  // zeta of k^u restricted to O(k,u)
};

struct BeliefAction {
    ControlId control = 0;
    Series cost;
    std::vector<BeliefTransition> transitions;
};

/// Reachable closure of an initial belief. Belief ids follow breadth-first
/// discovery order.
struct BeliefSpaceIndex {
    std::vector<KappaBelief> beliefs;
    std::vector<std::vector<BeliefAction>> actions;
    /// True when some update on the way had a rank clamped at kappa_cap.
    bool clamped = false;

    std::size_t size() const noexcept { return beliefs.size(); }
};

/// Throws Error{belief_explosion} past max_beliefs distinct beliefs and
/// Error{dead_end} when a reachable belief has no applicable control.
BeliefSpaceIndex reach(const QpomdpModel& model, const KappaBelief& k0, std::size_t max_beliefs = 10000);

/// The belief MDP of an index, one outcome per observation.
CompiledMdp compile(const QpomdpModel& model, const BeliefSpaceIndex& index);

struct BeliefViResult {
    ViResult vi;
    Policy policy;  // per belief id
};

BeliefViResult value_iterate_belief(const QpomdpModel& model, const BeliefSpaceIndex& index, const Rational& tol,
                                    int max_iter);

}  // namespace qmdp
