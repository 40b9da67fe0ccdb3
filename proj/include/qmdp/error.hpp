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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmdp {

enum class Errc {
    degree_mismatch,
    zero_series,
    not_invertible,
    invalid_rho,
    invalid_epsilon,
    underflow,
    truncation_too_small,
    model_validation,
    inapplicable_control,
    impossible_observation,
    dead_end,
    belief_explosion,
    oracle_too_large,
    epsilon_too_large,
    parse_error,
    internal,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// that callers (the CLI, the Python module) can map it without parsing text.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace qmdp
