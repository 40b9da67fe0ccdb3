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

// Line-oriented model files. One record per line, `#` starts a comment:
//
//   qmdp | qpomdp
//   states s1 s2 ...
//   controls <state> u1 u2 ...          (one record per state)
//   observations o1 o2 ...              (qpomdp only)
//   discount p/q
//   degree D                            (default 16)
//   kappamax K                          (default 12)
//   goal <state>                        (zero or more)
//   cost <state> <control> <value>
//   ktrans <state> <control> <next> <rank|inf>
//   ptrans <state> <control> <next> <series>      (qmdp only)
//   kobs <state> <control> <observation> <rank|inf>
//
// A cost <value> is a series such as `1 - 1/2*e^3`, or a quotient
// `(<series>) / (<series>)` that is expanded into a series on load. States a
// ktrans row does not mention get rank inf; states a ptrans row does not
// mention get mass 0. kobs rows are keyed by the state entered under the
// control.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qmdp/mdp.hpp"
#include "qmdp/pomdp.hpp"

namespace qmdp {

struct Symbols {
    std::vector<std::string> states;
    std::vector<std::string> controls;
    std::vector<std::string> observations;

    std::optional<StateId> state_id(std::string_view name) const;
    std::optional<ControlId> control_id(std::string_view name) const;
    std::optional<std::size_t> observation_id(std::string_view name) const;
};

struct QmdpFile {
    Symbols symbols;
    QmdpModel model;
    int kappa_cap = kDefaultKappaCap;
};

struct QpomdpFile {
    Symbols symbols;
    QpomdpModel model;
    std::vector<StateId> goals;
};

using ModelFile = std::variant<QmdpFile, QpomdpFile>;

/// Parses and fully validates a model. Syntax problems raise
/// Error{parse_error}, semantic ones Error{model_validation}; both messages
/// start with `line L, column C:`.
ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::filesystem::path& path);

/// Canonical text: header records first, then per state and ascending control
/// id the cost and transition records, then observation records.
/// parse_model(serialize(parse_model(f))) reproduces parse_model(f).
std::string serialize(const QmdpFile& file);
std::string serialize(const QpomdpFile& file);
std::string serialize(const ModelFile& file);

/// `J <name> = <series>` per line.
std::string serialize_values(const std::vector<std::string>& names, const ValueFunction& values);
/// `mu <name> = <control>` per line.
std::string serialize_policy(const std::vector<std::string>& names, const Symbols& symbols, const Policy& policy);

/// `s1:0 s2:1 s3:inf`; states left out get rank inf.
KappaBelief parse_belief(const Symbols& symbols, std::string_view spec);
std::string serialize_belief(const Symbols& symbols, const KappaBelief& k);

/// `s1:a s2:b`; every state must be listed unless it has a single control.
Policy parse_policy(const QmdpFile& file, std::string_view spec);

/// Belief ids are rendered `b<id>`.
std::vector<std::string> belief_names(const BeliefSpaceIndex& index);
std::string serialize_index(const Symbols& symbols, const BeliefSpaceIndex& index);

}  // namespace qmdp
