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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: qmdp_acceptance [data-dir]

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "qmdp/baseline.hpp"
#include "qmdp/error.hpp"
#include "qmdp/modelio.hpp"

namespace {

using namespace qmdp;
using testing::Gen;

struct Verdict {
    bool pass = true;
    std::string detail;
};

Series S(std::string_view text, int degree = kDefaultMaxDegree) { return parse_series(text, degree); }

Rational R(long p, long q = 1) { return make_rational(p, q); }

std::filesystem::path g_data_dir = QMDP_DATA_DIR;

Series geometric_half(int degree, int terms) {
    std::vector<Series::Term> t;
    for (int k = 0; k < terms && k <= degree; ++k) t.emplace_back(k, pow(R(1, 2), k));
    return Series::from_terms(t, degree);
}

Series sum_of(const QualitativeDistribution& d) {
    Series s(d.max_degree);
    for (const auto& m : d.masses) s += m;
    return s;
}

// 1. Worked embedding of {a:0, b:0, c:1, d:1, e:5}.
Verdict embedding_example() {
    const QmdpFile f = std::get<QmdpFile>(load_model(g_data_dir / "example2.qmdp"));
    const auto& k = std::get<KappaRanking>(f.model.actions[0][0].transition);
    QualitativeDistribution z = embed(k, f.model.max_degree);
    const std::vector<Series> expected{S("1/2 - 1/2*e - 1/2*e^5"), S("1/2 - 1/2*e - 1/2*e^5"), S("1/2*e - 1/2*e^5"),
                                       S("1/2*e - 1/2*e^5"), S("2*e^5")};
    const bool masses = z.masses == expected;
    const bool total = sum_of(z) == S("1");
    return {masses && total, "zeta(e) = " + to_string(z[4]) + ", sum = " + to_string(sum_of(z))};
}

// 2. Inverse of sum_k 2^-k e^k for several truncation degrees.
Verdict inverse_example() {
    Verdict out;
    for (int d : {4, 16, 64}) {
        const Series s = geometric_half(d, d + 1);
        const Series inv = inverse(s);
        const bool ok = inv == S("1 - 1/2*e", d) && s * inv == Series::constant(1, d);
        out.pass = out.pass && ok;
        out.detail += "D=" + std::to_string(d) + (ok ? " ok " : " MISMATCH ");
    }
    out.detail += "(inverse = 1 - 1/2*e)";
    return out;
}

// 3. Normalization, round trip and norm bound over 1000 random rankings.
Verdict embedding_suite() {
    Gen g(1001);
    const std::vector<Rational> rhos{R(2), R(10), R(100), R(1000)};
    int sum_fail = 0, round_fail = 0, bound_fail = 0, monotone_fail = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto size = static_cast<std::size_t>(g.uniform(1, 8));
        const KappaRanking k = g.ranking(size, 10);
        const QualitativeDistribution z = embed(k, kDefaultMaxDegree);
        if (sum_of(z) != Series::constant(1, kDefaultMaxDegree)) ++sum_fail;
        if (order_of(z) != k) ++round_fail;
        std::optional<Rational> previous;
        for (const auto& rho : rhos) {
            Rational total = 0;
            for (const auto& m : z.masses) total += norm(m, rho);
            const Rational bound = 1 + Rational(1 + Integer(static_cast<long>(size)) * (Integer(1) << size)) / (rho - 1);
            if (total > bound) ++bound_fail;
            if (previous && total > *previous) ++monotone_fail;
            previous = total;
        }
    }
    std::ostringstream os;
    os << "1000 rankings: sum!=1 " << sum_fail << ", round-trip " << round_fail << ", bound " << bound_fail
       << ", non-monotone " << monotone_fail;
    return {sum_fail + round_fail + bound_fail + monotone_fail == 0, os.str()};
}

// 4. Contraction of the Bellman operator and per-sweep residual decay.
Verdict contraction_suite() {
    Gen g(4004);
    int pair_fail = 0, flip_fail = 0, decay_fail = 0, models_with_pair_fail = 0, sweeps = 0;
    Rational worst_ratio = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const CompiledMdp mdp = compile(g.qmdp(6, 3, 2, 8));
        const RhoChoice rc = choose_rho(mdp);
        bool model_failed = false;
        for (int pair = 0; pair < 5; ++pair) {
            const ValueFunction j = g.values(mdp.size(), mdp.max_degree);
            const ValueFunction h = g.values(mdp.size(), mdp.max_degree);
            const Rational before = distance(j, h, rc.rho);
            const Rational after = distance(bellman_apply(mdp, j), bellman_apply(mdp, h), rc.rho);
            if (after > rc.gamma * before) {
                ++pair_fail;
                flip_fail += greedy_policy(mdp, j) != greedy_policy(mdp, h);
                model_failed = true;
                if (before > 0 && after / (rc.gamma * before) > worst_ratio) worst_ratio = after / (rc.gamma * before);
            }
        }
        models_with_pair_fail += model_failed;
        ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), default_tolerance(), 10000);
        for (std::size_t k = 1; k < vi.residuals.size(); ++k, ++sweeps)
            if (vi.residuals[k] > vi.gamma * vi.residuals[k - 1]) ++decay_fail;
    }
    std::ostringstream os;
    os << "200 models x 5 pairs: dist(TJ,TH) > gamma*dist(J,H) in " << pair_fail << " pairs (" << models_with_pair_fail
       << " models, " << flip_fail << " with differing greedy policies";
    if (pair_fail) os << ", worst dist(TJ,TH) / (gamma*dist(J,H)) = " << std::setprecision(3) << worst_ratio.get_d();
    os << "); residual decay violations " << decay_fail << " of " << sweeps << " sweeps";
    return {pair_fail + decay_fail == 0, os.str()};
}

// 5. Finite-horizon trajectory costs against the series solution.
Verdict trajectory_suite() {
    const auto start = std::chrono::steady_clock::now();
    const QmdpFile f = std::get<QmdpFile>(load_model(g_data_dir / "two_state.qmdp"));
    const QmdpModel m = resolve(f.model);
    const CompiledMdp mdp = compile(m);
    const int d = m.max_degree;
    ViResult vi = value_iterate(mdp, zero_values(mdp.size(), d), default_tolerance(), 1000);
    const Policy mu = greedy_policy(mdp, vi.values);
    const Series j_star = geometric_half(d, d + 1);
    const StateId s1 = *f.symbols.state_id("s1");

    bool ok = vi.converged() && mu[s1] == *f.symbols.control_id("a");
    ok = ok && trajectory_expected_cost(m, mu, s1, 2) == S("1 + 1/2*e", d);
    Rational gamma_n = 1;
    const Rational scale = norm(j_star, vi.rho);
    for (int n = 1; n <= 10; ++n) {
        gamma_n *= vi.gamma;
        const Series cost = trajectory_expected_cost(m, mu, s1, n);
        ok = ok && cost == geometric_half(d, n);
        ok = ok && norm(cost - j_star, vi.rho) <= gamma_n * scale;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && secs < 1.0;
    std::ostringstream os;
    os << "N=1..10 match sum_{k<N} 2^-k e^k within gamma^N*||J*||, N=2 -> "
       << to_string(trajectory_expected_cost(m, mu, s1, 2)) << ", " << std::fixed << secs << " s";
    return {ok, os.str()};
}

// 6. Min-plus belief updates against orders of Bayesian updates.
Verdict commutation_suite() {
    Gen g(6006);
    long checked = 0, mismatched = 0, skipped_clamped = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const QpomdpModel m = g.qpomdp(4, 3, 2, 2);
        const PomdpRows<Series> rows = embed_rows(m);
        const BeliefSpaceIndex index = reach(m, g.ranking(m.num_states(), 2), 5000);
        for (const KappaBelief& k : index.beliefs) {
            const QualitativeDistribution x = embed(k, m.max_degree);
            for (ControlId u : controls_for(m, k)) {
                const KappaRanking k_obs = obs_rank(m, predict(m, k, u), u);
                for (std::size_t o = 0; o < m.num_observations; ++o) {
                    if (k_obs[o].is_infinite()) {
                        try {
                            (void)bayes_update(rows, x.masses, u, o, Series(m.max_degree));
                            ++mismatched;
                        } catch (const Error& e) {
                            if (e.code() != Errc::impossible_observation) ++mismatched;
                        }
                        ++checked;
                        continue;
                    }
                    auto [next, clamped] = update_with_clamp(m, k, u, o);
                    if (clamped) {
                        ++skipped_clamped;
                        continue;
                    }
                    const auto bayes = bayes_update(rows, x.masses, u, o, Series(m.max_degree));
                    if (order_of({bayes.posterior, m.max_degree}) != next || bayes.obs_prob.order() != k_obs[o])
                        ++mismatched;
                    ++checked;
                }
            }
        }
    }
    std::ostringstream os;
    os << "500 models: " << checked << " (belief, u, o) triples, " << mismatched << " mismatches, " << skipped_clamped
       << " clamped triples excluded";
    return {mismatched == 0 && checked > 0, os.str()};
}

// True when every state has a unique minimizing control at the solved values.
bool tie_free(const CompiledMdp& mdp, const ValueFunction& j) {
    for (const auto& choices : mdp.choices) {
        std::vector<Series> q;
        for (const auto& c : choices) q.push_back(q_value(mdp, c, j));
        std::sort(q.begin(), q.end());
        if (q.size() > 1 && q[0] == q[1]) return false;
    }
    return true;
}

// 7. Agreement of numeric and qualitative greedy policies.
Verdict agreement_suite() {
    Gen g(7007);
    int accepted = 0, rejected = 0, no_agreement = 0, mismatches = 0, max_halvings = 0;
    // Mismatched models whose numeric policy equals the qualitative one at
    // every probe from some 2^-k down to 2^-12, and the largest such k.
    int settled_later = 0, settle_exponent = 0;
    while (accepted < 100) {
        const QmdpModel m = g.qmdp(6, 3, 2, 8);
        const CompiledMdp mdp = compile(m);
        ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), default_tolerance(), 10000);
        if (!tie_free(mdp, vi.values)) {
            ++rejected;
            continue;
        }
        ++accepted;
        AgreementResult r = find_agreement_epsilon(m, default_tolerance(), 20);
        if (!r.agreed) {
            ++no_agreement;
            continue;
        }
        max_halvings = std::max(max_halvings, r.halvings);
        const NumericSolution at = numeric_value_iterate(instantiate(m, r.eps0), default_tolerance(), 100000);
        if (at.policy == r.qualitative_policy) continue;
        ++mismatches;
        int settled = 0;
        for (int k = 12; k >= 2; --k) {
            const Rational eps = make_rational(1, 1L << k);
            if (numeric_value_iterate(instantiate(m, eps), default_tolerance(), 100000).policy != r.qualitative_policy) break;
            settled = k;
        }
        if (settled > 2) {
            ++settled_later;
            settle_exponent = std::max(settle_exponent, settled);
        }
    }
    std::ostringstream os;
    os << "100 tie-free models (" << rejected << " tied rejected): " << no_agreement << " without agreement, "
       << mismatches << " policy mismatches, at most " << max_halvings << " halvings";
    if (mismatches)
        os << "; " << settled_later << " of them match the qualitative policy at every probe from eps = 2^-"
           << settle_exponent << " down to 2^-12";
    return {no_agreement + mismatches == 0, os.str()};
}

// 8. Belief value iteration with revealing observations against the QMDP.
Verdict reduction_check() {
    const QmdpFile mf = std::get<QmdpFile>(load_model(g_data_dir / "two_state.qmdp"));
    const QpomdpFile pf = std::get<QpomdpFile>(load_model(g_data_dir / "two_state_observed.qpomdp"));
    const Rational tol = default_tolerance();
    ViResult direct = value_iterate(resolve(mf.model), zero_values(mf.model.num_states(), mf.model.max_degree), tol, 1000);

    bool ok = direct.converged();
    int compared = 0, exact = 0;
    for (StateId i = 0; i < pf.model.num_states(); ++i) {
        KappaBelief point(std::vector<Rank>(pf.model.num_states(), Rank::infinity()));
        point[i] = 0;
        const BeliefSpaceIndex index = reach(pf.model, point);
        BeliefViResult r = value_iterate_belief(pf.model, index, tol, 1000);
        ok = ok && r.vi.converged();
        for (std::size_t b = 0; b < index.size(); ++b) {
            const auto& k = index.beliefs[b];
            if (std::count_if(k.ranks.begin(), k.ranks.end(), [](Rank x) { return x.is_finite(); }) != 1) continue;
            const auto s = static_cast<StateId>(std::find(k.ranks.begin(), k.ranks.end(), Rank(0)) - k.ranks.begin());
            const Series& expected = direct.values[*mf.symbols.state_id(pf.symbols.states[s])];
            ++compared;
            exact += r.vi.values[b] == expected;
            ok = ok && norm(r.vi.values[b] - expected, direct.rho) <= tol;
        }
    }
    std::ostringstream os;
    os << compared << " point-mass beliefs compared, " << exact << " identical, J(s1) = "
       << to_string(direct.values[0]).substr(0, 40) << "...";
    return {ok && compared >= 2, os.str()};
}

// 9. The order-of-magnitude recursion cannot separate what the series solution separates.
Verdict degeneracy_check() {
    const QmdpFile f = std::get<QmdpFile>(load_model(g_data_dir / "chain.qmdp"));
    const QmdpModel m = resolve(f.model);
    const CompiledMdp mdp = compile(m);
    const std::vector<Rank> flat = oom_bellman_fixpoint(m, f.kappa_cap);
    ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), default_tolerance(), 1000);

    const std::set<StateId> goals(m.goals.begin(), m.goals.end());
    std::set<Rank> flat_values;
    std::set<std::string> series_values;
    for (StateId i = 0; i < m.num_states(); ++i) {
        if (goals.count(i)) continue;
        flat_values.insert(flat[i]);
        series_values.insert(to_string(vi.values[i]));
    }

    // Controls of s1 under both recursions.
    const StateId s1 = *f.symbols.state_id("s1");
    std::vector<Series> q;
    std::vector<Rank> q_flat;
    for (const auto& c : mdp.choices[s1]) {
        q.push_back(q_value(mdp, c, vi.values));
        Rank worst = c.cost.order();
        for (const auto& o : c.outcomes) worst = std::max(worst, o.prob.order() + flat[o.next]);
        q_flat.push_back(worst);
    }
    const bool strict = q.size() == 2 && q[0] != q[1];
    const bool flat_tie = q_flat.size() == 2 && q_flat[0] == q_flat[1];

    std::ostringstream os;
    os << "distinct non-goal values: oom " << flat_values.size() << ", series " << series_values.size()
       << "; s1 Q-values " << (q.size() == 2 ? to_string(q[0]) + " vs " + to_string(q[1]) : "?")
       << ", oom Q-values " << (q_flat.size() == 2 ? to_string(q_flat[0]) + " vs " + to_string(q_flat[1]) : "?");
    return {flat_values.size() == 1 && series_values.size() == 2 && strict && flat_tie, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_data_dir = argv[1];
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 embedding example", embedding_example},
        {"2 inverse example", inverse_example},
        {"3 embedding suite", embedding_suite},
        {"4 contraction suite", contraction_suite},
        {"5 trajectory oracle", trajectory_suite},
        {"6 kappa/Bayes commutation", commutation_suite},
        {"7 policy agreement", agreement_suite},
        {"8 belief reduction", reduction_check},
        {"9 order-of-magnitude degeneracy", degeneracy_check},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << " [" << std::fixed
                  << std::setprecision(2) << secs << " s]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
