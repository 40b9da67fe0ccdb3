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

#include "qmdp/baseline.hpp"

#include <algorithm>
#include <string>

namespace qmdp {

NumericMdp instantiate(const QmdpModel& model, const Rational& eps0) {
    if (eps0 <= 0 || eps0 >= 1)
        throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1), got " + to_string(eps0));
    const QmdpModel resolved = is_resolved(model) ? model : resolve(model);
    NumericMdp m;
    m.discount = resolved.discount;
    m.actions.resize(resolved.num_states());
    for (StateId i = 0; i < resolved.num_states(); ++i) {
        for (const auto& a : resolved.actions[i]) {
            NumericAction na{a.control, evaluate(a.cost, eps0), {}};
            Rational total = 0;
            for (const auto& mass : std::get<QualitativeDistribution>(a.transition).masses) {
                Rational p = evaluate(mass, eps0);
                if (p < 0 || p > 1)
                    throw Error(Errc::epsilon_too_large, "mass " + to_string(mass) + " evaluates to " + to_string(p) +
                                                             " at epsilon " + to_string(eps0));
                total += p;
                na.transition.push_back(std::move(p));
            }
            if (total != 1) throw Error(Errc::internal, "instantiated row does not sum to 1");
            m.actions[i].push_back(std::move(na));
        }
    }
    return m;
}

namespace {

Rational numeric_q(const NumericMdp& m, const NumericAction& a, const std::vector<Rational>& j) {
    Rational expectation = 0;
    for (std::size_t s = 0; s < a.transition.size(); ++s)
        if (a.transition[s] != 0) expectation += a.transition[s] * j[s];
    return a.cost + m.discount * expectation;
}

}  // namespace

NumericSolution numeric_value_iterate(const NumericMdp& m, const Rational& tol, int max_iter) {
    if (m.discount <= 0 || m.discount >= 1) throw Error(Errc::model_validation, "discount must lie in (0, 1)");
    if (tol <= 0) throw Error(Errc::model_validation, "tolerance must be positive");
    const std::size_t n = m.num_states();
    NumericSolution sol;
    sol.values.assign(n, Rational(0));
    while (sol.iterations < max_iter) {
        std::vector<Rational> next(n);
        Rational residual = 0;
        for (StateId i = 0; i < n; ++i) {
            Rational best = numeric_q(m, m.actions[i][0], sol.values);
            for (std::size_t a = 1; a < m.actions[i].size(); ++a) best = std::min(best, numeric_q(m, m.actions[i][a], sol.values));
            Rational step = abs(Rational(best - sol.values[i]));
            if (step > residual) residual = std::move(step);
            next[i] = std::move(best);
        }
        sol.values = std::move(next);
        sol.residual = residual;
        ++sol.iterations;
        if (residual <= tol) {
            sol.converged = true;
            break;
        }
    }
    sol.policy.resize(n);
    for (StateId i = 0; i < n; ++i) {
        const auto& acts = m.actions[i];
        std::size_t arg = 0;
        Rational best = numeric_q(m, acts[0], sol.values);
        for (std::size_t a = 1; a < acts.size(); ++a) {
            Rational q = numeric_q(m, acts[a], sol.values);
            if (q < best) {
                best = std::move(q);
                arg = a;
            }
        }
        sol.policy[i] = acts[arg].control;
    }
    return sol;
}

PomdpRows<Series> embed_rows(const QpomdpModel& model) {
    validate(model);
    const std::size_t n = model.num_states();
    ControlId top = 0;
    for (const auto& acts : model.actions)
        for (const auto& a : acts) top = std::max(top, a.control);
    const auto num_controls = static_cast<std::size_t>(top) + 1;

    PomdpRows<Series> rows;
    rows.num_states = n;
    rows.num_observations = model.num_observations;
    rows.transition.assign(n, std::vector<std::optional<std::vector<Series>>>(num_controls));
    rows.observation.assign(n, std::vector<std::optional<std::vector<Series>>>(num_controls));
    for (StateId i = 0; i < n; ++i)
        for (const auto& a : model.actions[i])
            rows.transition[i][static_cast<std::size_t>(a.control)] = embed(a.transition, model.max_degree).masses;
    for (const auto& [key, theta] : model.observation) {
        const auto [state, control] = key;
        if (state < n && control >= 0 && static_cast<std::size_t>(control) < num_controls)
            rows.observation[state][static_cast<std::size_t>(control)] = embed(theta, model.max_degree).masses;
    }
    return rows;
}

PomdpRows<Rational> instantiate(const PomdpRows<Series>& rows, const Rational& eps0) {
    auto convert = [&](const std::vector<std::vector<std::optional<std::vector<Series>>>>& table) {
        std::vector<std::vector<std::optional<std::vector<Rational>>>> out(table.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            out[i].resize(table[i].size());
            for (std::size_t u = 0; u < table[i].size(); ++u) {
                if (!table[i][u]) continue;
                std::vector<Rational> row;
                for (const auto& s : *table[i][u]) {
                    Rational p = evaluate(s, eps0);
                    if (p < 0 || p > 1)
                        throw Error(Errc::epsilon_too_large, "mass leaves [0, 1] at epsilon " + to_string(eps0));
                    row.push_back(std::move(p));
                }
                out[i][u] = std::move(row);
            }
        }
        return out;
    };
    return {rows.num_states, rows.num_observations, convert(rows.transition), convert(rows.observation)};
}

AgreementResult find_agreement_epsilon(const QmdpModel& model, const Rational& tol, int max_halvings, int max_iter) {
    const QmdpModel resolved = is_resolved(model) ? model : resolve(model);
    AgreementResult result;
    {
        const CompiledMdp mdp = compile(resolved);
        ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), tol, max_iter);
        result.qualitative_policy = greedy_policy(mdp, vi.values);
    }

    std::optional<Policy> previous;
    Rational previous_eps;
    Rational eps0 = make_rational(1, 4);
    for (int halvings = 0; halvings <= max_halvings; ++halvings, eps0 /= 2) {
        std::optional<Policy> current;
        try {
            current = numeric_value_iterate(instantiate(resolved, eps0), tol, max_iter).policy;
        } catch (const Error& e) {
            if (e.code() != Errc::epsilon_too_large) throw;
        }
        if (current && previous && *current == *previous) {
            result.eps0 = previous_eps;
            result.numeric_policy = *current;
            result.halvings = halvings;
            result.agreed = true;
            return result;
        }
        previous = std::move(current);
        previous_eps = eps0;
    }
    result.eps0 = previous_eps;
    if (previous) result.numeric_policy = *previous;
    result.halvings = max_halvings;
    return result;
}

std::vector<Rank> oom_bellman_fixpoint(const QmdpModel& model, int kappa_cap) {
    const QmdpModel resolved = is_resolved(model) ? model : resolve(model);
    const std::size_t n = resolved.num_states();
    std::vector<bool> anchored(n, false);
    for (StateId g : resolved.goals) anchored[g] = true;

    std::vector<Rank> values(n, Rank::infinity());
    for (StateId i = 0; i < n; ++i)
        if (anchored[i]) values[i] = 0;

    auto cap = [&](Rank r) { return r.is_finite() && r.value() > kappa_cap ? Rank(kappa_cap) : r; };

    // Monotone descent from the top of a finite lattice: at most (cap + 2) * n rounds.
    const std::size_t max_rounds = (static_cast<std::size_t>(std::max(kappa_cap, 0)) + 3) * n + 3;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool changed = false;
        std::vector<Rank> next = values;
        for (StateId i = 0; i < n; ++i) {
            if (anchored[i]) continue;
            Rank best = Rank::infinity();
            for (const auto& a : resolved.actions[i]) {
                Rank worst = a.cost.order();
                const auto& dist = std::get<QualitativeDistribution>(a.transition);
                for (std::size_t j = 0; j < dist.size(); ++j) {
                    if (dist[j].is_zero()) continue;
                    worst = std::max(worst, dist[j].order() + values[j]);
                }
                best = std::min(best, worst);
            }
            next[i] = cap(best);
            changed = changed || next[i] != values[i];
        }
        values = std::move(next);
        if (!changed) return values;
    }
    throw Error(Errc::internal, "order-of-magnitude iteration failed to settle");
}

}  // namespace qmdp
