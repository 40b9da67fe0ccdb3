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

#include "qmdp/pomdp.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <map>
#include <string>

#include "qmdp/error.hpp"

namespace qmdp {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::model_validation, what); }

std::string describe(const KappaRanking& k) {
    std::string out = "{";
    for (std::size_t i = 0; i < k.size(); ++i) out += (i ? " " : "") + to_string(k[i]);
    return out + "}";
}

const KappaRanking& observation_row(const QpomdpModel& model, StateId i, ControlId u) {
    auto it = model.observation.find({i, u});
    if (it == model.observation.end())
        invalid("no observation ranking for control " + std::to_string(u) + " entering state " + std::to_string(i));
    return it->second;
}

void require_applicable(const QpomdpModel& model, const KappaBelief& k, ControlId u) {
    auto controls = controls_for(model, k);
    if (!std::binary_search(controls.begin(), controls.end(), u))
        throw Error(Errc::inapplicable_control,
                    "control " + std::to_string(u) + " is not applicable in belief " + describe(k));
}

struct Updated {
    KappaBelief belief;
    bool clamped = false;
};

Updated condition(const QpomdpModel& model, const KappaRanking& k_u, const KappaRanking& k_obs, ControlId u,
                  std::size_t o) {
    if (o >= model.num_observations) invalid("observation " + std::to_string(o) + " out of range");
    if (k_obs[o].is_infinite())
        throw Error(Errc::impossible_observation, "observation " + std::to_string(o) + " cannot follow control " +
                                                      std::to_string(u) + " from this belief");
    Updated out{KappaBelief(std::vector<Rank>(k_u.size(), Rank::infinity())), false};
    for (StateId i = 0; i < k_u.size(); ++i) {
        if (k_u[i].is_infinite()) continue;
        Rank r = k_u[i] + observation_row(model, i, u)[o];
        if (r.is_infinite()) continue;
        int value = r.value() - k_obs[o].value();
        if (value > model.kappa_cap) {
            value = model.kappa_cap;
            out.clamped = true;
        }
        out.belief[i] = value;
    }
    return out;
}

}  // namespace

const PomdpAction* QpomdpModel::find_action(StateId state, ControlId control) const {
    for (const auto& a : actions[state])
        if (a.control == control) return &a;
    return nullptr;
}

void validate(const QpomdpModel& model) {
    const std::size_t n = model.num_states();
    if (n == 0) invalid("model has no states");
    if (model.num_observations == 0) invalid("model has no observations");
    if (model.discount <= 0 || model.discount >= 1) invalid("discount must lie in (0, 1), got " + to_string(model.discount));
    if (model.kappa_cap < 0 || model.kappa_cap > model.max_degree)
        invalid("kappa cap must lie in [0, degree] so that every belief can be embedded");
    for (StateId j = 0; j < n; ++j) {
        const auto& acts = model.actions[j];
        if (acts.empty()) invalid("state " + std::to_string(j) + " has no controls");
        for (std::size_t a = 0; a < acts.size(); ++a) {
            const auto& act = acts[a];
            const std::string where = "state " + std::to_string(j) + ", control " + std::to_string(act.control);
            if (a > 0 && act.control <= acts[a - 1].control)
                invalid("state " + std::to_string(j) + ": controls must be listed once, in ascending id");
            if (act.cost.max_degree() != model.max_degree) invalid(where + ": cost truncation degree differs from the model's");
            if (act.transition.size() != n) invalid(where + ": transition ranking has the wrong size");
            if (auto v = validate_kappa(act.transition)) invalid(where + ": " + *v);
            for (StateId i = 0; i < n; ++i) {
                if (act.transition[i].is_infinite()) continue;
                const auto& obs = observation_row(model, i, act.control);
                if (obs.size() != model.num_observations)
                    invalid("observation ranking for control " + std::to_string(act.control) + " entering state " +
                            std::to_string(i) + " has the wrong size");
                if (auto v = validate_kappa(obs)) invalid("observation ranking, state " + std::to_string(i) + ": " + *v);
            }
        }
    }
}

void validate_belief(const QpomdpModel& model, const KappaBelief& k) {
    if (k.size() != model.num_states()) invalid("belief covers " + std::to_string(k.size()) + " states, expected " + std::to_string(model.num_states()));
    if (auto v = validate_kappa(k)) invalid("belief " + describe(k) + ": " + *v);
    for (const auto& r : k.ranks)
        if (r.is_finite() && r.value() > model.kappa_cap)
            invalid("belief " + describe(k) + " exceeds the kappa cap " + std::to_string(model.kappa_cap));
}

std::vector<ControlId> controls_for(const QpomdpModel& model, const KappaBelief& k) {
    std::vector<ControlId> common;
    bool first = true;
    for (StateId i = 0; i < k.size(); ++i) {
        if (k[i].is_infinite()) continue;
        std::vector<ControlId> here;
        for (const auto& a : model.actions[i]) here.push_back(a.control);
        if (first) {
            common = std::move(here);
            first = false;
        } else {
            std::vector<ControlId> both;
            std::set_intersection(common.begin(), common.end(), here.begin(), here.end(), std::back_inserter(both));
            common = std::move(both);
        }
    }
    return common;
}

KappaRanking predict(const QpomdpModel& model, const KappaBelief& k, ControlId u) {
    require_applicable(model, k, u);
    KappaRanking out(std::vector<Rank>(model.num_states(), Rank::infinity()));
    for (StateId j = 0; j < k.size(); ++j) {
        if (k[j].is_infinite()) continue;
        const auto& psi = model.find_action(j, u)->transition;
        for (StateId i = 0; i < psi.size(); ++i) out[i] = std::min(out[i], k[j] + psi[i]);
    }
    return out;
}

KappaRanking obs_rank(const QpomdpModel& model, const KappaRanking& k_u, ControlId u) {
    KappaRanking out(std::vector<Rank>(model.num_observations, Rank::infinity()));
    for (StateId i = 0; i < k_u.size(); ++i) {
        if (k_u[i].is_infinite()) continue;
        const auto& theta = observation_row(model, i, u);
        for (std::size_t o = 0; o < out.size(); ++o) out[o] = std::min(out[o], k_u[i] + theta[o]);
    }
    return out;
}

std::pair<KappaBelief, bool> update_with_clamp(const QpomdpModel& model, const KappaBelief& k, ControlId u,
                                               std::size_t o) {
    KappaRanking k_u = predict(model, k, u);
    KappaRanking k_obs = obs_rank(model, k_u, u);
    Updated up = condition(model, k_u, k_obs, u, o);
    return {std::move(up.belief), up.clamped};
}

KappaBelief update(const QpomdpModel& model, const KappaBelief& k, ControlId u, std::size_t o) {
    return update_with_clamp(model, k, u, o).first;
}

Series belief_cost(const QpomdpModel& model, const KappaBelief& k, ControlId u) {
    require_applicable(model, k, u);
    QualitativeDistribution zeta = embed(k, model.max_degree);
    Series total(model.max_degree);
    for (StateId i = 0; i < k.size(); ++i)
        if (!zeta[i].is_zero()) total += model.find_action(i, u)->cost * zeta[i];
    return total;
}

BeliefSpaceIndex reach(const QpomdpModel& model, const KappaBelief& k0, std::size_t max_beliefs) {
    validate(model);
    validate_belief(model, k0);
    BeliefSpaceIndex index;
    std::map<KappaBelief, std::size_t> ids;
    std::deque<std::size_t> frontier;

    auto intern = [&](const KappaBelief& k) {
        auto [it, inserted] = ids.try_emplace(k, index.beliefs.size());
        if (inserted) {
            if (index.beliefs.size() >= max_beliefs)
                throw Error(Errc::belief_explosion,
                            "more than " + std::to_string(max_beliefs) + " reachable beliefs");
            index.beliefs.push_back(k);
            frontier.push_back(it->second);
        }
        return it->second;
    };

    intern(k0);
    while (!frontier.empty()) {
        const std::size_t id = frontier.front();
        frontier.pop_front();
        const KappaBelief belief = index.beliefs[id];
        auto controls = controls_for(model, belief);
        if (controls.empty()) throw Error(Errc::dead_end, "no control is applicable in belief " + describe(belief));
        std::vector<BeliefAction> acts;
        for (ControlId u : controls) {
            BeliefAction act{u, belief_cost(model, belief, u), {}};
            KappaRanking k_u = predict(model, belief, u);
            KappaRanking k_obs = obs_rank(model, k_u, u);

            std::vector<std::size_t> support;
            KappaRanking restricted;
            for (std::size_t o = 0; o < k_obs.size(); ++o) {
                if (k_obs[o].is_infinite()) continue;
                support.push_back(o);
                restricted.ranks.push_back(k_obs[o]);
            }
            QualitativeDistribution zeta = embed(restricted, model.max_degree);
            for (std::size_t s = 0; s < support.size(); ++s) {
                Updated up = condition(model, k_u, k_obs, u, support[s]);
                index.clamped = index.clamped || up.clamped;
                act.transitions.push_back({support[s], intern(up.belief), zeta[s]});
            }
            acts.push_back(std::move(act));
        }
        if (index.actions.size() <= id) index.actions.resize(id + 1);
        index.actions[id] = std::move(acts);
    }
    index.actions.resize(index.beliefs.size());
    return index;
}

CompiledMdp compile(const QpomdpModel& model, const BeliefSpaceIndex& index) {
    CompiledMdp mdp;
    mdp.discount = model.discount;
    mdp.max_degree = model.max_degree;
    mdp.choices.resize(index.size());
    for (std::size_t b = 0; b < index.size(); ++b) {
        for (const auto& act : index.actions[b]) {
            Choice c{act.control, act.cost, {}};
            for (const auto& t : act.transitions) c.outcomes.push_back({t.successor, t.prob});
            mdp.choices[b].push_back(std::move(c));
        }
    }
    return mdp;
}

BeliefViResult value_iterate_belief(const QpomdpModel& model, const BeliefSpaceIndex& index, const Rational& tol,
                                    int max_iter) {
    CompiledMdp mdp = compile(model, index);
    BeliefViResult out;
    out.vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), tol, max_iter);
    out.policy = greedy_policy(mdp, out.vi.values);
    return out;
}

}  // namespace qmdp
