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

// Command-line driver. Exit codes: 0 success, 2 invalid input, 3 no
// convergence (or no policy agreement), 4 belief explosion.

#include <CLI11.hpp>

#include <iostream>
#include <set>
#include <string>
#include <variant>

#include "qmdp/baseline.hpp"
#include "qmdp/error.hpp"
#include "qmdp/modelio.hpp"

namespace {

using namespace qmdp;

constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitExplosion = 4;

struct SolveOptions {
    std::string tol = "1/1000000000";
    int max_iter = 10000;
};

const QmdpFile& require_qmdp(const ModelFile& file) {
    if (const auto* f = std::get_if<QmdpFile>(&file)) return *f;
    throw Error(Errc::model_validation, "this command needs a qmdp model");
}

const QpomdpFile& require_qpomdp(const ModelFile& file) {
    if (const auto* f = std::get_if<QpomdpFile>(&file)) return *f;
    throw Error(Errc::model_validation, "this command needs a qpomdp model");
}

std::string stop_name(StopReason s) {
    switch (s) {
        case StopReason::tolerance: return "tolerance";
        case StopReason::exact: return "exact";
        case StopReason::max_iter: return "max-iter";
    }
    return "?";
}

void print_vi_summary(const ViResult& vi) {
    std::cout << "iterations " << vi.iterations << '\n'
              << "residual " << to_string(vi.residual) << '\n'
              << "rho " << to_string(vi.rho) << '\n'
              << "gamma " << to_string(vi.gamma) << '\n'
              << "bound " << to_string(suboptimality_bound(vi.gamma, vi.residual)) << '\n'
              << "stop " << stop_name(vi.stop) << '\n';
}

int cmd_validate(const std::string& path) {
    ModelFile file = load_model(path);
    std::visit(
        [](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            std::cout << "ok " << (std::is_same_v<F, QmdpFile> ? "qmdp" : "qpomdp") << ' ' << f.symbols.states.size()
                      << " states " << f.symbols.controls.size() << " controls\n";
        },
        file);
    return 0;
}

void print_zeta(std::string_view label, const KappaRanking& k, const std::vector<std::string>& names, int degree) {
    QualitativeDistribution z = embed(k, degree);
    std::cout << label << '\n';
    Series total(degree);
    for (std::size_t j = 0; j < z.size(); ++j) {
        std::cout << "  " << names[j] << " = " << to_string(z[j]) << '\n';
        total += z[j];
    }
    std::cout << "  sum = " << to_string(total) << '\n';
}

int cmd_embed(const std::string& path) {
    ModelFile file = load_model(path);
    if (const auto* f = std::get_if<QmdpFile>(&file)) {
        const auto& s = f->symbols;
        for (StateId i = 0; i < f->model.num_states(); ++i)
            for (const auto& a : f->model.actions[i])
                if (const auto* k = std::get_if<KappaRanking>(&a.transition))
                    print_zeta("ktrans " + s.states[i] + ' ' + s.controls[a.control], *k, s.states, f->model.max_degree);
    } else {
        const auto& pf = std::get<QpomdpFile>(file);
        const auto& s = pf.symbols;
        for (StateId i = 0; i < pf.model.num_states(); ++i)
            for (const auto& a : pf.model.actions[i])
                print_zeta("ktrans " + s.states[i] + ' ' + s.controls[a.control], a.transition, s.states, pf.model.max_degree);
        for (const auto& [key, theta] : pf.model.observation)
            print_zeta("kobs " + s.states[key.first] + ' ' + s.controls[key.second], theta, s.observations,
                       pf.model.max_degree);
    }
    return 0;
}

int cmd_solve(const std::string& path, const SolveOptions& opt, const std::string& j0) {
    if (j0 != "zero") throw Error(Errc::model_validation, "--j0 only accepts 'zero'");
    ModelFile file = load_model(path);
    const QmdpFile& f = require_qmdp(file);
    const CompiledMdp mdp = compile(resolve(f.model));
    ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), parse_rational(opt.tol), opt.max_iter);
    std::cout << serialize_values(f.symbols.states, vi.values)
              << serialize_policy(f.symbols.states, f.symbols, greedy_policy(mdp, vi.values));
    print_vi_summary(vi);
    return vi.converged() ? 0 : kExitNoConvergence;
}

int cmd_solve_belief(const std::string& path, const std::string& init, std::size_t max_beliefs,
                     const SolveOptions& opt) {
    ModelFile file = load_model(path);
    const QpomdpFile& f = require_qpomdp(file);
    BeliefSpaceIndex index = reach(f.model, parse_belief(f.symbols, init), max_beliefs);
    BeliefViResult r = value_iterate_belief(f.model, index, parse_rational(opt.tol), opt.max_iter);
    const auto names = belief_names(index);
    std::cout << serialize_index(f.symbols, index) << (index.clamped ? "clamped yes\n" : "clamped no\n")
              << serialize_values(names, r.vi.values) << serialize_policy(names, f.symbols, r.policy);
    print_vi_summary(r.vi);
    return r.vi.converged() ? 0 : kExitNoConvergence;
}

int cmd_instantiate(const std::string& path, const std::string& epsilon, const SolveOptions& opt) {
    ModelFile file = load_model(path);
    const QmdpFile& f = require_qmdp(file);
    const auto& s = f.symbols;
    NumericMdp m = instantiate(f.model, parse_rational(epsilon));
    for (StateId i = 0; i < m.num_states(); ++i) {
        for (const auto& a : m.actions[i]) {
            const std::string prefix = s.states[i] + ' ' + s.controls[a.control];
            std::cout << "cost " << prefix << " = " << to_string(a.cost) << '\n';
            for (std::size_t j = 0; j < a.transition.size(); ++j)
                if (a.transition[j] != 0) std::cout << "prob " << prefix << ' ' << s.states[j] << " = " << to_string(a.transition[j]) << '\n';
        }
    }
    NumericSolution sol = numeric_value_iterate(m, parse_rational(opt.tol), opt.max_iter);
    for (StateId i = 0; i < sol.values.size(); ++i) std::cout << "J " << s.states[i] << " = " << to_string(sol.values[i]) << '\n';
    std::cout << serialize_policy(s.states, s, sol.policy) << "iterations " << sol.iterations << '\n'
              << "residual " << to_string(sol.residual) << '\n';
    return sol.converged ? 0 : kExitNoConvergence;
}

int cmd_agree(const std::string& path, int max_halvings, const SolveOptions& opt) {
    ModelFile file = load_model(path);
    const QmdpFile& f = require_qmdp(file);
    AgreementResult r = find_agreement_epsilon(f.model, parse_rational(opt.tol), max_halvings, opt.max_iter);
    std::cout << "epsilon " << to_string(r.eps0) << '\n'
              << "halvings " << r.halvings << '\n'
              << "agreed " << (r.agreed ? "yes" : "no") << '\n';
    for (StateId i = 0; i < r.qualitative_policy.size(); ++i) {
        std::cout << "mu " << f.symbols.states[i] << " = " << f.symbols.controls[r.qualitative_policy[i]];
        if (i < r.numeric_policy.size()) std::cout << " numeric " << f.symbols.controls[r.numeric_policy[i]];
        std::cout << '\n';
    }
    const bool match = r.agreed && r.numeric_policy == r.qualitative_policy;
    std::cout << "match " << (match ? "yes" : "no") << '\n';
    return r.agreed ? 0 : kExitNoConvergence;
}

int cmd_oom(const std::string& path, const SolveOptions& opt) {
    ModelFile file = load_model(path);
    const QmdpFile& f = require_qmdp(file);
    const QmdpModel resolved = resolve(f.model);
    std::vector<Rank> flat = oom_bellman_fixpoint(resolved, f.kappa_cap);
    const CompiledMdp mdp = compile(resolved);
    ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), parse_rational(opt.tol), opt.max_iter);

    std::set<StateId> goals(resolved.goals.begin(), resolved.goals.end());
    std::set<Rank> flat_distinct;
    std::set<std::string> series_distinct;
    for (StateId i = 0; i < flat.size(); ++i) {
        std::cout << "Jo " << f.symbols.states[i] << " = " << to_string(flat[i]) << '\n';
        if (goals.count(i)) continue;
        flat_distinct.insert(flat[i]);
        series_distinct.insert(to_string(vi.values[i]));
    }
    std::cout << "distinct-oom " << flat_distinct.size() << '\n'
              << "distinct-series " << series_distinct.size() << '\n';
    return vi.converged() ? 0 : kExitNoConvergence;
}

int cmd_oracle(const std::string& path, const std::string& policy, int horizon) {
    ModelFile file = load_model(path);
    const QmdpFile& f = require_qmdp(file);
    const QmdpModel resolved = resolve(f.model);
    Policy mu = parse_policy(f, policy);
    for (StateId i = 0; i < resolved.num_states(); ++i)
        std::cout << "cost " << f.symbols.states[i] << " = " << to_string(trajectory_expected_cost(resolved, mu, i, horizon))
                  << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver for qualitative MDPs and POMDPs"};
    app.require_subcommand(1);

    std::string path;
    SolveOptions opt;
    auto add_file = [&](CLI::App* sub) { sub->add_option("file", path, "model file")->required()->check(CLI::ExistingFile); };
    auto add_solve = [&](CLI::App* sub) {
        sub->add_option("--tol", opt.tol, "residual tolerance p/q");
        sub->add_option("--max-iter", opt.max_iter, "sweep budget")->check(CLI::PositiveNumber);
    };

    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a model");
    add_file(validate_cmd);

    auto* embed_cmd = app.add_subcommand("embed", "print the embedding of every kappa row");
    add_file(embed_cmd);

    std::string j0 = "zero";
    auto* solve_cmd = app.add_subcommand("solve", "value iteration on a qmdp model");
    add_file(solve_cmd);
    add_solve(solve_cmd);
    solve_cmd->add_option("--j0", j0, "initial value function")->check(CLI::IsMember({"zero"}));

    std::string init;
    std::size_t max_beliefs = 10000;
    auto* belief_cmd = app.add_subcommand("solve-belief", "belief-space value iteration on a qpomdp model");
    add_file(belief_cmd);
    add_solve(belief_cmd);
    belief_cmd->add_option("--init", init, "initial belief, e.g. 's1:0 s2:1'")->required();
    belief_cmd->add_option("--max-beliefs", max_beliefs, "reachable belief budget");

    std::string epsilon;
    auto* inst_cmd = app.add_subcommand("instantiate", "evaluate a qmdp model at a concrete epsilon and solve it");
    add_file(inst_cmd);
    add_solve(inst_cmd);
    inst_cmd->add_option("--epsilon", epsilon, "epsilon p/q in (0, 1)")->required();

    int max_halvings = 20;
    auto* agree_cmd = app.add_subcommand("agree", "find an epsilon where numeric and qualitative policies agree");
    add_file(agree_cmd);
    add_solve(agree_cmd);
    agree_cmd->add_option("--max-halvings", max_halvings, "probe budget");

    auto* oom_cmd = app.add_subcommand("oom", "order-of-magnitude Bellman fixpoint next to the series solution");
    add_file(oom_cmd);
    add_solve(oom_cmd);

    std::string policy;
    int horizon = 1;
    auto* oracle_cmd = app.add_subcommand("oracle", "expected cost by trajectory enumeration");
    add_file(oracle_cmd);
    oracle_cmd->add_option("--policy", policy, "policy, e.g. 's1:a goal:stay'")->required();
    oracle_cmd->add_option("--horizon", horizon, "number of stages")->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*validate_cmd) return cmd_validate(path);
        if (*embed_cmd) return cmd_embed(path);
        if (*solve_cmd) return cmd_solve(path, opt, j0);
        if (*belief_cmd) return cmd_solve_belief(path, init, max_beliefs, opt);
        if (*inst_cmd) return cmd_instantiate(path, epsilon, opt);
        if (*agree_cmd) return cmd_agree(path, max_halvings, opt);
        if (*oom_cmd) return cmd_oom(path, opt);
        if (*oracle_cmd) return cmd_oracle(path, policy, horizon);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
        return e.code() == Errc::belief_explosion ? kExitExplosion : kExitInvalid;
    }
    return kExitInvalid;
}
