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

#include "qmdp/modelio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qmdp/error.hpp"

namespace qmdp {

namespace {

template <typename Id>
std::optional<Id> lookup(const std::vector<std::string>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<Id>(it - names.begin());
}

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

struct Record {
    std::size_t line = 0;
    std::vector<Token> tokens;
    std::string_view raw;

    std::string_view keyword() const { return tokens.front().text; }

    // Everything from token `index` to the end of the line.
    std::string_view rest(std::size_t index) const { return raw.substr(tokens[index].column - 1); }
};

[[noreturn]] void fail(Errc code, std::size_t line, std::size_t column, const std::string& what) {
    throw Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

[[noreturn]] void fail(Errc code, const Record& r, std::size_t token, const std::string& what) {
    std::size_t column = token < r.tokens.size() ? r.tokens[token].column : r.raw.size() + 1;
    fail(code, r.line, column, what);
}

std::vector<Record> split_records(std::string_view text) {
    std::vector<Record> records;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Record r{line_no, {}, line};
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos > start) r.tokens.push_back({line.substr(start, pos - start), start + 1});
        }
        if (!r.tokens.empty()) records.push_back(std::move(r));
    }
    return records;
}

using RowKey = std::pair<StateId, ControlId>;

template <typename V>
struct Entry {
    V value;
    std::size_t line;
};

// Everything gathered from the file before the target model is assembled.
struct Collected {
    bool pomdp = false;
    Symbols symbols;
    std::optional<Rational> discount;
    int degree = kDefaultMaxDegree;
    int kappa_cap = kDefaultKappaCap;
    std::vector<StateId> goals;
    std::vector<std::vector<std::string_view>> control_names;  // per state, as listed
    std::vector<std::size_t> control_lines;
    std::map<RowKey, Entry<Series>> costs;
    std::map<RowKey, std::map<StateId, Entry<Rank>>> ktrans;
    std::map<RowKey, std::map<StateId, Entry<Series>>> ptrans;
    std::map<RowKey, std::map<std::size_t, Entry<Rank>>> kobs;
};

class FileParser {
public:
    explicit FileParser(std::string_view text) : records_(split_records(text)) {}

    Collected run() {
        if (records_.empty()) fail(Errc::parse_error, 1, 1, "empty model file");
        const Record& first = records_.front();
        if (first.keyword() != "qmdp" && first.keyword() != "qpomdp")
            fail(Errc::parse_error, first, 0, "file must start with 'qmdp' or 'qpomdp'");
        expect_arity(first, 1, 1);
        out_.pomdp = first.keyword() == "qpomdp";

        // Header records first so that body records can be resolved in any order.
        for (std::size_t k = 1; k < records_.size(); ++k) header(records_[k]);
        if (out_.symbols.states.empty()) fail(Errc::model_validation, 1, 1, "missing 'states' record");
        if (!out_.discount) fail(Errc::model_validation, 1, 1, "missing 'discount' record");
        if (out_.pomdp && out_.symbols.observations.empty())
            fail(Errc::model_validation, 1, 1, "missing 'observations' record");
        assign_controls();
        for (std::size_t k = 1; k < records_.size(); ++k) body(records_[k]);
        return std::move(out_);
    }

private:
    void expect_arity(const Record& r, std::size_t lo, std::size_t hi) {
        if (r.tokens.size() < lo) fail(Errc::parse_error, r, r.tokens.size(), "too few fields for '" + std::string(r.keyword()) + "'");
        if (r.tokens.size() > hi) fail(Errc::parse_error, r, hi, "unexpected field");
    }

    void once(const Record& r, bool& seen) {
        if (seen) fail(Errc::model_validation, r, 0, "duplicate '" + std::string(r.keyword()) + "' record");
        seen = true;
    }

    int parse_int(const Record& r, std::size_t t) {
        try {
            Rank v = parse_extended_int(r.tokens[t].text);
            if (v.is_infinite() || v.value() < 0) throw Error(Errc::parse_error, "");
            return v.value();
        } catch (const Error&) {
            fail(Errc::parse_error, r, t, "expected a non-negative integer, got '" + std::string(r.tokens[t].text) + "'");
        }
    }

    void names(const Record& r, std::vector<std::string>& into) {
        expect_arity(r, 2, SIZE_MAX);
        for (std::size_t t = 1; t < r.tokens.size(); ++t) {
            std::string name(r.tokens[t].text);
            if (std::find(into.begin(), into.end(), name) != into.end())
                fail(Errc::model_validation, r, t, "name '" + name + "' declared twice");
            into.push_back(std::move(name));
        }
    }

    void header(const Record& r) {
        const auto kw = r.keyword();
        if (kw == "qmdp" || kw == "qpomdp") {
            fail(Errc::parse_error, r, 0, "model kind declared twice");
        } else if (kw == "states") {
            once(r, seen_states_);
            names(r, out_.symbols.states);
            out_.control_names.assign(out_.symbols.states.size(), {});
            out_.control_lines.assign(out_.symbols.states.size(), 0);
        } else if (kw == "observations") {
            if (!out_.pomdp) fail(Errc::parse_error, r, 0, "'observations' is only valid in a qpomdp file");
            once(r, seen_observations_);
            names(r, out_.symbols.observations);
        } else if (kw == "discount") {
            once(r, seen_discount_);
            expect_arity(r, 2, 2);
            try {
                out_.discount = parse_rational(r.tokens[1].text);
            } catch (const Error& e) {
                fail(Errc::parse_error, r, 1, e.what());
            }
        } else if (kw == "degree") {
            once(r, seen_degree_);
            expect_arity(r, 2, 2);
            out_.degree = parse_int(r, 1);
        } else if (kw == "kappamax") {
            once(r, seen_kappamax_);
            expect_arity(r, 2, 2);
            out_.kappa_cap = parse_int(r, 1);
        } else if (kw == "controls" || kw == "goal" || kw == "cost" || kw == "ktrans" || kw == "ptrans" || kw == "kobs") {
            // handled once the header is known
        } else {
            fail(Errc::parse_error, r, 0, "unknown record '" + std::string(kw) + "'");
        }
    }

    StateId state(const Record& r, std::size_t t) {
        if (!seen_states_) fail(Errc::model_validation, r, t, "'states' must be declared");
        auto id = out_.symbols.state_id(r.tokens[t].text);
        if (!id) fail(Errc::model_validation, r, t, "undeclared state '" + std::string(r.tokens[t].text) + "'");
        return *id;
    }

    ControlId control(const Record& r, std::size_t t) {
        auto id = out_.symbols.control_id(r.tokens[t].text);
        if (!id) fail(Errc::model_validation, r, t, "undeclared control '" + std::string(r.tokens[t].text) + "'");
        return *id;
    }

    // Control ids follow first appearance when walking states in declaration
    // order, so the canonical rendering reproduces them.
    void assign_controls() {
        for (const auto& r : records_) {
            if (r.keyword() != "controls") continue;
            expect_arity(r, 3, SIZE_MAX);
            StateId i = state(r, 1);
            if (out_.control_lines[i] != 0) fail(Errc::model_validation, r, 1, "controls for this state declared twice");
            out_.control_lines[i] = r.line;
            for (std::size_t t = 2; t < r.tokens.size(); ++t) {
                auto& listed = out_.control_names[i];
                if (std::find(listed.begin(), listed.end(), r.tokens[t].text) != listed.end())
                    fail(Errc::model_validation, r, t, "control listed twice");
                listed.push_back(r.tokens[t].text);
            }
        }
        for (StateId i = 0; i < out_.control_names.size(); ++i) {
            if (out_.control_names[i].empty())
                fail(Errc::model_validation, 1, 1, "state '" + out_.symbols.states[i] + "' has no 'controls' record");
            for (auto name : out_.control_names[i])
                if (!out_.symbols.control_id(name)) out_.symbols.controls.emplace_back(name);
        }
    }

    RowKey applicable(const Record& r) {
        StateId i = state(r, 1);
        ControlId u = control(r, 2);
        const auto& listed = out_.control_names[i];
        if (std::find(listed.begin(), listed.end(), r.tokens[2].text) == listed.end())
            fail(Errc::model_validation, r, 2, "control '" + std::string(r.tokens[2].text) + "' is not available in state '" +
                                                   out_.symbols.states[i] + "'");
        return {i, u};
    }

    Series series_value(const Record& r, std::size_t t) {
        std::string_view text = r.rest(t);
        try {
            auto open = text.find('(');
            if (open == std::string_view::npos) return parse_series(text, out_.degree);
            // (<series>) / (<series>)
            auto close = text.find(')');
            auto open2 = text.find('(', close);
            auto close2 = text.rfind(')');
            std::string_view slash = close == std::string_view::npos || open2 == std::string_view::npos
                                         ? std::string_view()
                                         : text.substr(close + 1, open2 - close - 1);
            auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
            bool ok = open == 0 && close2 + 1 == text.size() && std::count(slash.begin(), slash.end(), '/') == 1 &&
                      std::all_of(slash.begin(), slash.end(), [&](char c) { return c == '/' || is_space(c); });
            if (!ok) throw Error(Errc::parse_error, "expected '(<series>) / (<series>)'");
            Series num = parse_series(text.substr(1, close - 1), out_.degree);
            Series den = parse_series(text.substr(open2 + 1, close2 - open2 - 1), out_.degree);
            return num * inverse(den);
        } catch (const Error& e) {
            fail(e.code() == Errc::parse_error ? Errc::parse_error : Errc::model_validation, r, t, e.what());
        }
    }

    Rank rank_value(const Record& r, std::size_t t) {
        try {
            Rank v = parse_extended_int(r.tokens[t].text);
            if (v.is_finite() && v.value() < 0) throw Error(Errc::parse_error, "");
            return v;
        } catch (const Error&) {
            fail(Errc::parse_error, r, t, "expected a non-negative rank or 'inf', got '" + std::string(r.tokens[t].text) + "'");
        }
    }

    template <typename K, typename V>
    void put(std::map<K, Entry<V>>& into, const K& key, V value, const Record& r) {
        auto [it, inserted] = into.try_emplace(key, Entry<V>{std::move(value), r.line});
        if (!inserted)
            fail(Errc::model_validation, r, 0, "duplicate entry (first given on line " + std::to_string(it->second.line) + ")");
    }

    void body(const Record& r) {
        const auto kw = r.keyword();
        if (kw == "goal") {
            expect_arity(r, 2, 2);
            StateId g = state(r, 1);
            if (std::find(out_.goals.begin(), out_.goals.end(), g) != out_.goals.end())
                fail(Errc::model_validation, r, 1, "goal declared twice");
            out_.goals.push_back(g);
        } else if (kw == "cost") {
            expect_arity(r, 4, SIZE_MAX);
            RowKey key = applicable(r);
            put(out_.costs, key, series_value(r, 3), r);
        } else if (kw == "ktrans" || kw == "ptrans") {
            RowKey key = applicable(r);
            StateId j = state(r, 3);
            if (kw == "ktrans") {
                expect_arity(r, 5, 5);
                if (out_.ptrans.count(key)) fail(Errc::model_validation, r, 0, "row mixes ktrans and ptrans entries");
                put(out_.ktrans[key], j, rank_value(r, 4), r);
            } else {
                if (out_.pomdp) fail(Errc::model_validation, r, 0, "qpomdp transitions must be given as ktrans rankings");
                expect_arity(r, 5, SIZE_MAX);
                if (out_.ktrans.count(key)) fail(Errc::model_validation, r, 0, "row mixes ktrans and ptrans entries");
                put(out_.ptrans[key], j, series_value(r, 4), r);
            }
        } else if (kw == "kobs") {
            if (!out_.pomdp) fail(Errc::parse_error, r, 0, "'kobs' is only valid in a qpomdp file");
            expect_arity(r, 5, 5);
            StateId i = state(r, 1);
            ControlId u = control(r, 2);
            auto o = out_.symbols.observation_id(r.tokens[3].text);
            if (!o) fail(Errc::model_validation, r, 3, "undeclared observation '" + std::string(r.tokens[3].text) + "'");
            put(out_.kobs[{i, u}], *o, rank_value(r, 4), r);
        }
    }

    std::vector<Record> records_;
    Collected out_;
    bool seen_states_ = false;
    bool seen_observations_ = false;
    bool seen_discount_ = false;
    bool seen_degree_ = false;
    bool seen_kappamax_ = false;
};

template <typename Key>
std::size_t first_line(const std::map<Key, Entry<Rank>>& entries) {
    std::size_t line = SIZE_MAX;
    for (const auto& [k, e] : entries) line = std::min(line, e.line);
    return line;
}

KappaRanking ranking_from(const std::map<std::size_t, Entry<Rank>>& entries, std::size_t size,
                          const std::string& what) {
    KappaRanking k(std::vector<Rank>(size, Rank::infinity()));
    for (const auto& [idx, e] : entries) k[idx] = e.value;
    if (auto v = validate_kappa(k)) fail(Errc::model_validation, first_line(entries), 1, what + ": " + *v);
    return k;
}

struct AssembledRow {
    ControlId control;
    Series cost;
    TransitionSpec transition;
};

std::vector<std::vector<AssembledRow>> assemble_rows(const Collected& c) {
    const std::size_t n = c.symbols.states.size();
    std::vector<std::vector<AssembledRow>> rows(n);
    for (StateId i = 0; i < n; ++i) {
        std::vector<ControlId> ids;
        for (auto name : c.control_names[i]) ids.push_back(*c.symbols.control_id(name));
        std::sort(ids.begin(), ids.end());
        for (ControlId u : ids) {
            const std::string where = "state '" + c.symbols.states[i] + "', control '" + c.symbols.controls[u] + "'";
            auto cost = c.costs.find({i, u});
            if (cost == c.costs.end()) fail(Errc::model_validation, c.control_lines[i], 1, where + " has no cost");
            if (auto k = c.ktrans.find({i, u}); k != c.ktrans.end()) {
                KappaRanking psi = ranking_from(k->second, n, where);
                for (const auto& r : psi.ranks)
                    if (r.is_finite() && r.value() > c.degree)
                        fail(Errc::model_validation, first_line(k->second), 1,
                             where + ": rank " + to_string(r) + " exceeds the truncation degree");
                rows[i].push_back({u, cost->second.value, std::move(psi)});
            } else if (auto p = c.ptrans.find({i, u}); p != c.ptrans.end()) {
                QualitativeDistribution dist;
                dist.max_degree = c.degree;
                dist.masses.assign(n, Series(c.degree));
                std::size_t line = SIZE_MAX;
                for (const auto& [j, e] : p->second) {
                    dist.masses[j] = e.value;
                    line = std::min(line, e.line);
                }
                if (auto v = validate_distribution(dist)) fail(Errc::model_validation, line, 1, where + ": " + *v);
                rows[i].push_back({u, cost->second.value, std::move(dist)});
            } else {
                fail(Errc::model_validation, c.control_lines[i], 1, where + " has no transition row");
            }
        }
    }
    return rows;
}

void check_header(const Collected& c) {
    if (*c.discount <= 0 || *c.discount >= 1)
        fail(Errc::model_validation, 1, 1, "discount must lie in (0, 1), got " + to_string(*c.discount));
}

QmdpFile build_qmdp(Collected c) {
    check_header(c);
    QmdpFile file;
    file.kappa_cap = c.kappa_cap;
    file.model.discount = *c.discount;
    file.model.max_degree = c.degree;
    file.model.goals = c.goals;
    for (auto& state_rows : assemble_rows(c)) {
        std::vector<Action> acts;
        for (auto& row : state_rows) acts.push_back({row.control, std::move(row.cost), std::move(row.transition)});
        file.model.actions.push_back(std::move(acts));
    }
    file.symbols = std::move(c.symbols);
    validate(file.model);
    return file;
}

QpomdpFile build_qpomdp(Collected c) {
    check_header(c);
    const std::size_t n = c.symbols.states.size();
    QpomdpFile file;
    file.goals = c.goals;
    file.model.discount = *c.discount;
    file.model.max_degree = c.degree;
    file.model.kappa_cap = c.kappa_cap;
    file.model.num_observations = c.symbols.observations.size();
    if (c.kappa_cap > c.degree) fail(Errc::model_validation, 1, 1, "kappamax must not exceed degree");
    for (auto& state_rows : assemble_rows(c)) {
        std::vector<PomdpAction> acts;
        for (auto& row : state_rows)
            acts.push_back({row.control, std::move(row.cost), std::get<KappaRanking>(std::move(row.transition))});
        file.model.actions.push_back(std::move(acts));
    }
    for (const auto& [key, entries] : c.kobs) {
        const std::string where = "observations entering state '" + c.symbols.states[key.first] + "' under control '" +
                                  c.symbols.controls[key.second] + "'";
        file.model.observation.emplace(key, ranking_from(entries, c.symbols.observations.size(), where));
    }
    // Every state a control can lead into needs an observation ranking.
    for (StateId j = 0; j < n; ++j)
        for (const auto& a : file.model.actions[j])
            for (StateId i = 0; i < n; ++i)
                if (a.transition[i].is_finite() && !file.model.observation.count({i, a.control}))
                    fail(Errc::model_validation, c.control_lines[j], 1,
                         "no kobs entries for control '" + c.symbols.controls[a.control] + "' entering state '" +
                             c.symbols.states[i] + "'");
    file.symbols = std::move(c.symbols);
    validate(file.model);
    return file;
}

void emit_header(std::ostringstream& os, std::string_view kind, const Symbols& s, const Rational& discount,
                 int degree, int kappa_cap, const std::vector<StateId>& goals,
                 const std::vector<std::vector<ControlId>>& controls) {
    os << kind << "\nstates";
    for (const auto& name : s.states) os << ' ' << name;
    os << '\n';
    for (StateId i = 0; i < s.states.size(); ++i) {
        os << "controls " << s.states[i];
        for (ControlId u : controls[i]) os << ' ' << s.controls[u];
        os << '\n';
    }
    if (!s.observations.empty()) {
        os << "observations";
        for (const auto& name : s.observations) os << ' ' << name;
        os << '\n';
    }
    os << "discount " << to_string(discount) << "\ndegree " << degree << "\nkappamax " << kappa_cap << '\n';
    std::vector<StateId> sorted_goals = goals;
    std::sort(sorted_goals.begin(), sorted_goals.end());
    for (StateId g : sorted_goals) os << "goal " << s.states[g] << '\n';
}

void emit_kappa(std::ostringstream& os, std::string_view kw, std::string_view prefix, const KappaRanking& k,
                const std::vector<std::string>& names) {
    for (std::size_t j = 0; j < k.size(); ++j)
        if (k[j].is_finite()) os << kw << ' ' << prefix << ' ' << names[j] << ' ' << to_string(k[j]) << '\n';
}

}  // namespace

std::optional<StateId> Symbols::state_id(std::string_view name) const { return lookup<StateId>(states, name); }
std::optional<ControlId> Symbols::control_id(std::string_view name) const { return lookup<ControlId>(controls, name); }
std::optional<std::size_t> Symbols::observation_id(std::string_view name) const {
    return lookup<std::size_t>(observations, name);
}

ModelFile parse_model(std::string_view text) {
    Collected c = FileParser(text).run();
    if (c.pomdp) return build_qpomdp(std::move(c));
    return build_qmdp(std::move(c));
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::parse_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string serialize(const QmdpFile& file) {
    const auto& m = file.model;
    const auto& s = file.symbols;
    std::vector<std::vector<ControlId>> controls;
    for (const auto& acts : m.actions) {
        controls.emplace_back();
        for (const auto& a : acts) controls.back().push_back(a.control);
    }
    std::ostringstream os;
    emit_header(os, "qmdp", s, m.discount, m.max_degree, file.kappa_cap, m.goals, controls);
    for (StateId i = 0; i < m.num_states(); ++i) {
        for (const auto& a : m.actions[i]) {
            const std::string prefix = s.states[i] + ' ' + s.controls[a.control];
            os << "cost " << prefix << ' ' << to_string(a.cost) << '\n';
            if (const auto* k = std::get_if<KappaRanking>(&a.transition)) {
                emit_kappa(os, "ktrans", prefix, *k, s.states);
            } else {
                const auto& dist = std::get<QualitativeDistribution>(a.transition);
                for (std::size_t j = 0; j < dist.size(); ++j)
                    if (!dist[j].is_zero()) os << "ptrans " << prefix << ' ' << s.states[j] << ' ' << to_string(dist[j]) << '\n';
            }
        }
    }
    return os.str();
}

std::string serialize(const QpomdpFile& file) {
    const auto& m = file.model;
    const auto& s = file.symbols;
    std::vector<std::vector<ControlId>> controls;
    for (const auto& acts : m.actions) {
        controls.emplace_back();
        for (const auto& a : acts) controls.back().push_back(a.control);
    }
    std::ostringstream os;
    emit_header(os, "qpomdp", s, m.discount, m.max_degree, m.kappa_cap, file.goals, controls);
    for (StateId i = 0; i < m.num_states(); ++i) {
        for (const auto& a : m.actions[i]) {
            const std::string prefix = s.states[i] + ' ' + s.controls[a.control];
            os << "cost " << prefix << ' ' << to_string(a.cost) << '\n';
            emit_kappa(os, "ktrans", prefix, a.transition, s.states);
        }
    }
    for (const auto& [key, theta] : m.observation)
        emit_kappa(os, "kobs", s.states[key.first] + ' ' + s.controls[key.second], theta, s.observations);
    return os.str();
}

std::string serialize(const ModelFile& file) {
    return std::visit([](const auto& f) { return serialize(f); }, file);
}

std::string serialize_values(const std::vector<std::string>& names, const ValueFunction& values) {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) os << "J " << names[i] << " = " << to_string(values[i]) << '\n';
    return os.str();
}

std::string serialize_policy(const std::vector<std::string>& names, const Symbols& symbols, const Policy& policy) {
    std::ostringstream os;
    for (std::size_t i = 0; i < policy.size(); ++i)
        os << "mu " << names[i] << " = " << symbols.controls[static_cast<std::size_t>(policy[i])] << '\n';
    return os.str();
}

KappaBelief parse_belief(const Symbols& symbols, std::string_view spec) {
    KappaBelief k(std::vector<Rank>(symbols.states.size(), Rank::infinity()));
    std::vector<bool> seen(symbols.states.size(), false);
    std::istringstream in{std::string(spec)};
    std::string item;
    while (in >> item) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(Errc::parse_error, "belief entry '" + item + "' is not state:rank");
        auto id = symbols.state_id(std::string_view(item).substr(0, colon));
        if (!id) throw Error(Errc::model_validation, "belief names undeclared state '" + item.substr(0, colon) + "'");
        if (seen[*id]) throw Error(Errc::model_validation, "belief lists state '" + item.substr(0, colon) + "' twice");
        seen[*id] = true;
        Rank r = parse_extended_int(std::string_view(item).substr(colon + 1));
        if (r.is_finite() && r.value() < 0) throw Error(Errc::parse_error, "negative rank in belief entry '" + item + "'");
        k[*id] = r;
    }
    return k;
}

std::string serialize_belief(const Symbols& symbols, const KappaBelief& k) {
    std::string out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) out += ' ';
        out += symbols.states[i] + ':' + to_string(k[i]);
    }
    return out;
}

Policy parse_policy(const QmdpFile& file, std::string_view spec) {
    const auto& s = file.symbols;
    const auto& m = file.model;
    Policy mu(m.num_states(), -1);
    std::istringstream in{std::string(spec)};
    std::string item;
    while (in >> item) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(Errc::parse_error, "policy entry '" + item + "' is not state:control");
        auto i = s.state_id(std::string_view(item).substr(0, colon));
        auto u = s.control_id(std::string_view(item).substr(colon + 1));
        if (!i || !u) throw Error(Errc::model_validation, "policy entry '" + item + "' names an undeclared state or control");
        const auto& acts = m.actions[*i];
        if (std::none_of(acts.begin(), acts.end(), [&](const Action& a) { return a.control == *u; }))
            throw Error(Errc::inapplicable_control, "policy entry '" + item + "': control not available in that state");
        mu[*i] = *u;
    }
    for (StateId i = 0; i < mu.size(); ++i) {
        if (mu[i] >= 0) continue;
        if (m.actions[i].size() != 1)
            throw Error(Errc::model_validation, "policy does not choose a control for state '" + s.states[i] + "'");
        mu[i] = m.actions[i].front().control;
    }
    return mu;
}

std::vector<std::string> belief_names(const BeliefSpaceIndex& index) {
    std::vector<std::string> names;
    for (std::size_t b = 0; b < index.size(); ++b) names.push_back("b" + std::to_string(b));
    return names;
}

std::string serialize_index(const Symbols& symbols, const BeliefSpaceIndex& index) {
    std::ostringstream os;
    for (std::size_t b = 0; b < index.size(); ++b) os << "belief b" << b << " = " << serialize_belief(symbols, index.beliefs[b]) << '\n';
    for (std::size_t b = 0; b < index.size(); ++b) {
        for (const auto& act : index.actions[b]) {
            const std::string& u = symbols.controls[static_cast<std::size_t>(act.control)];
            os << "cost b" << b << ' ' << u << " = " << to_string(act.cost) << '\n';
            for (const auto& t : act.transitions)
                os << "next b" << b << ' ' << u << ' ' << symbols.observations[t.observation] << " = b" << t.successor
                   << " @ " << to_string(t.prob) << '\n';
        }
    }
    return os.str();
}

}  // namespace qmdp
