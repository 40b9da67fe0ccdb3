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

#include "qmdp/mdp.hpp"

#include <algorithm>
#include <string>

#include "qmdp/error.hpp"

namespace qmdp {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::model_validation, what); }

std::string where(StateId i, ControlId u) {
    return "state " + std::to_string(i) + ", control " + std::to_string(u);
}

void validate_row(const TransitionSpec& row, std::size_t n, int max_degree, StateId i, ControlId u) {
    if (const auto* k = std::get_if<KappaRanking>(&row)) {
        if (k->size() != n) invalid(where(i, u) + ": ranking covers " + std::to_string(k->size()) + " states, expected " + std::to_string(n));
        if (auto v = validate_kappa(*k)) invalid(where(i, u) + ": " + *v);
        for (const auto& r : k->ranks)
            if (r.is_finite() && r.value() > max_degree)
                invalid(where(i, u) + ": rank " + std::to_string(r.value()) + " exceeds truncation degree " + std::to_string(max_degree));
        return;
    }
    const auto& dist = std::get<QualitativeDistribution>(row);
    if (dist.size() != n) invalid(where(i, u) + ": distribution covers " + std::to_string(dist.size()) + " states, expected " + std::to_string(n));
    if (dist.max_degree != max_degree) invalid(where(i, u) + ": distribution truncation degree differs from the model's");
    if (auto v = validate_distribution(dist)) invalid(where(i, u) + ": " + *v);
}

const Choice& choice_for(const CompiledMdp& mdp, StateId state, ControlId control) {
    for (const auto& c : mdp.choices[state])
        if (c.control == control) return c;
    throw Error(Errc::inapplicable_control,
                "control " + std::to_string(control) + " is not available in state " + std::to_string(state));
}

}  // namespace

void validate(const QmdpModel& model) {
    const std::size_t n = model.num_states();
    if (n == 0) invalid("model has no states");
    if (model.discount <= 0 || model.discount >= 1) invalid("discount must lie in (0, 1), got " + to_string(model.discount));
    if (model.max_degree < 0) invalid("negative truncation degree");
    for (StateId i = 0; i < n; ++i) {
        const auto& acts = model.actions[i];
        if (acts.empty()) invalid("state " + std::to_string(i) + " has no controls");
        for (std::size_t a = 0; a < acts.size(); ++a) {
            if (a > 0 && acts[a].control <= acts[a - 1].control)
                invalid("state " + std::to_string(i) + ": controls must be listed once, in ascending id");
            if (acts[a].cost.max_degree() != model.max_degree)
                invalid(where(i, acts[a].control) + ": cost truncation degree differs from the model's");
            validate_row(acts[a].transition, n, model.max_degree, i, acts[a].control);
        }
    }
    for (StateId g : model.goals)
        if (g >= n) invalid("goal state " + std::to_string(g) + " out of range");
}

bool is_resolved(const QmdpModel& model) {
    for (const auto& acts : model.actions)
        for (const auto& a : acts)
            if (!std::holds_alternative<QualitativeDistribution>(a.transition)) return false;
    return true;
}

QmdpModel resolve(const QmdpModel& model) {
    validate(model);
    QmdpModel out = model;
    for (auto& acts : out.actions)
        for (auto& a : acts)
            if (const auto* k = std::get_if<KappaRanking>(&a.transition)) a.transition = embed(*k, model.max_degree);
    return out;
}

CompiledMdp compile(const QmdpModel& model) {
    if (!is_resolved(model)) throw Error(Errc::model_validation, "model has kappa rows; resolve it first");
    CompiledMdp mdp;
    mdp.discount = model.discount;
    mdp.max_degree = model.max_degree;
    mdp.choices.resize(model.num_states());
    for (StateId i = 0; i < model.num_states(); ++i) {
        for (const auto& a : model.actions[i]) {
            Choice c{a.control, a.cost, {}};
            const auto& dist = std::get<QualitativeDistribution>(a.transition);
            for (std::size_t j = 0; j < dist.size(); ++j)
                if (!dist[j].is_zero()) c.outcomes.push_back({j, dist[j]});
            mdp.choices[i].push_back(std::move(c));
        }
    }
    return mdp;
}

Series q_value(const CompiledMdp& mdp, const Choice& choice, const ValueFunction& j) {
    Series expectation(mdp.max_degree);
    for (const auto& o : choice.outcomes) expectation += o.prob * j[o.next];
    return choice.cost + mdp.discount * expectation;
}

namespace {

void check_dims(const CompiledMdp& mdp, const ValueFunction& j) {
    if (j.size() != mdp.size())
        throw Error(Errc::model_validation, "value function has " + std::to_string(j.size()) + " entries, model has " +
                                                std::to_string(mdp.size()) + " states");
    for (const auto& s : j)
        if (s.max_degree() != mdp.max_degree)
            throw Error(Errc::degree_mismatch, "value function truncation degree differs from the model's");
}

// Returns (best q-value, index of the chosen control within choices[i]).
std::pair<Series, std::size_t> best_choice(const CompiledMdp& mdp, StateId i, const ValueFunction& j) {
    const auto& choices = mdp.choices[i];
    Series best = q_value(mdp, choices[0], j);
    std::size_t arg = 0;
    for (std::size_t c = 1; c < choices.size(); ++c) {
        Series q = q_value(mdp, choices[c], j);
        if (q < best) {  // strict: earlier (lower-id) controls win ties
            best = std::move(q);
            arg = c;
        }
    }
    return {std::move(best), arg};
}

}  // namespace

ValueFunction bellman_apply(const CompiledMdp& mdp, const ValueFunction& j) {
    check_dims(mdp, j);
    ValueFunction out;
    out.reserve(mdp.size());
    for (StateId i = 0; i < mdp.size(); ++i) out.push_back(best_choice(mdp, i, j).first);
    return out;
}

ValueFunction bellman_apply(const QmdpModel& model, const ValueFunction& j) { return bellman_apply(compile(model), j); }

Policy greedy_policy(const CompiledMdp& mdp, const ValueFunction& j) {
    check_dims(mdp, j);
    Policy mu(mdp.size());
    for (StateId i = 0; i < mdp.size(); ++i) mu[i] = mdp.choices[i][best_choice(mdp, i, j).second].control;
    return mu;
}

Policy greedy_policy(const QmdpModel& model, const ValueFunction& j) { return greedy_policy(compile(model), j); }

Rational distance(const ValueFunction& a, const ValueFunction& b, const Rational& rho) {
    if (a.size() != b.size()) throw Error(Errc::model_validation, "value functions differ in length");
    Rational worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, norm(a[i] - b[i], rho));
    return worst;
}

Rational contraction_coefficient(const CompiledMdp& mdp, const Rational& rho) {
    Rational worst = 0;
    for (const auto& choices : mdp.choices) {
        for (const auto& c : choices) {
            Rational total = 0;
            for (const auto& o : c.outcomes) total += norm(o.prob, rho);
            worst = std::max(worst, total);
        }
    }
    return mdp.discount * worst;
}

RhoChoice choose_rho(const CompiledMdp& mdp) {
    if (mdp.discount <= 0 || mdp.discount >= 1)
        throw Error(Errc::model_validation, "discount must lie in (0, 1)");
    Rational rho = 2;
    for (int doubling = 1; doubling <= 64; ++doubling) {
        Rational gamma = contraction_coefficient(mdp, rho);
        if (gamma < 1) return {rho, gamma};
        rho *= 2;
    }
    throw Error(Errc::internal, "no rho up to 2^64 makes the operator a contraction");
}

RhoChoice choose_rho(const QmdpModel& model) { return choose_rho(compile(model)); }

ValueFunction zero_values(std::size_t n, int max_degree) { return ValueFunction(n, Series(max_degree)); }

ViResult value_iterate(const CompiledMdp& mdp, const ValueFunction& j0, const Rational& tol, int max_iter) {
    if (tol <= 0) throw Error(Errc::model_validation, "tolerance must be positive");
    check_dims(mdp, j0);
    const RhoChoice rc = choose_rho(mdp);
    ViResult result;
    result.rho = rc.rho;
    result.gamma = rc.gamma;
    result.values = j0;
    while (result.iterations < max_iter) {
        ValueFunction next = bellman_apply(mdp, result.values);
        result.residual = distance(next, result.values, rc.rho);
        result.residuals.push_back(result.residual);
        ++result.iterations;
        const bool exact = next == result.values;
        result.values = std::move(next);
        if (exact) {
            result.stop = StopReason::exact;
            return result;
        }
        if (result.residual <= tol) {
            result.stop = StopReason::tolerance;
            return result;
        }
    }
    result.stop = StopReason::max_iter;
    return result;
}

ViResult value_iterate(const QmdpModel& model, const ValueFunction& j0, const Rational& tol, int max_iter) {
    return value_iterate(compile(model), j0, tol, max_iter);
}

Rational suboptimality_bound(const Rational& gamma, const Rational& residual) {
    if (gamma < 0 || gamma >= 1) throw Error(Errc::internal, "contraction coefficient must lie in [0, 1)");
    return gamma / (1 - gamma) * residual;
}

Rational suboptimality_bound(const QmdpModel& model, const Rational& residual, const Rational& rho) {
    return suboptimality_bound(contraction_coefficient(compile(model), rho), residual);
}

namespace {

struct TrajectoryEnumerator {
    const CompiledMdp& mdp;
    const Policy& policy;
    int horizon;
    std::vector<Rational> discount_powers;
    Series total;

    void walk(StateId state, int depth, const Series& prob, const Series& cost) {
        if (depth == horizon) {
            total += prob * cost;
            return;
        }
        const Choice& c = choice_for(mdp, state, policy[state]);
        Series next_cost = cost + discount_powers[depth] * c.cost;
        for (const auto& o : c.outcomes) walk(o.next, depth + 1, prob * o.prob, next_cost);
    }
};

}  // namespace

Series trajectory_expected_cost(const QmdpModel& model, const Policy& policy, StateId start, int horizon) {
    const CompiledMdp mdp = compile(model);
    if (policy.size() != mdp.size()) throw Error(Errc::model_validation, "policy length differs from the state count");
    if (start >= mdp.size()) throw Error(Errc::model_validation, "start state out of range");
    if (horizon < 1) throw Error(Errc::model_validation, "horizon must be at least 1");

    // paths[s] = number of trajectories of the remaining length from s; saturates past the cap.
    std::vector<long long> paths(mdp.size(), 1);
    for (int step = 0; step < horizon; ++step) {
        std::vector<long long> next(mdp.size(), 0);
        for (StateId s = 0; s < mdp.size(); ++s) {
            if (std::none_of(mdp.choices[s].begin(), mdp.choices[s].end(),
                             [&](const Choice& c) { return c.control == policy[s]; }))
                continue;  // unreachable states may carry any control; checked lazily during the walk
            for (const auto& o : choice_for(mdp, s, policy[s]).outcomes)
                next[s] = std::min(next[s] + paths[o.next], kMaxTrajectories + 1);
        }
        paths = std::move(next);
    }
    if (paths[start] > kMaxTrajectories)
        throw Error(Errc::oracle_too_large, "more than " + std::to_string(kMaxTrajectories) + " trajectories of length " +
                                                std::to_string(horizon));

    TrajectoryEnumerator walker{mdp, policy, horizon, {}, Series(mdp.max_degree)};
    Rational power = 1;
    for (int k = 0; k < horizon; ++k) {
        walker.discount_powers.push_back(power);
        power *= mdp.discount;
    }
    walker.walk(start, 0, Series::constant(1, mdp.max_degree), Series(mdp.max_degree));
    return walker.total;
}

}  // namespace qmdp
