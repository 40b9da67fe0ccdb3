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

#include "qmdp/rational.hpp"

#include <cctype>
#include <charconv>

#include "qmdp/error.hpp"

namespace qmdp {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::degree_mismatch: return "degree-mismatch";
        case Errc::zero_series: return "zero-series";
        case Errc::not_invertible: return "not-invertible";
        case Errc::invalid_rho: return "invalid-rho";
        case Errc::invalid_epsilon: return "invalid-epsilon";
        case Errc::underflow: return "underflow";
        case Errc::truncation_too_small: return "truncation-too-small";
        case Errc::model_validation: return "model-validation";
        case Errc::inapplicable_control: return "inapplicable-control";
        case Errc::impossible_observation: return "impossible-observation";
        case Errc::dead_end: return "dead-end";
        case Errc::belief_explosion: return "belief-explosion";
        case Errc::oracle_too_large: return "oracle-too-large";
        case Errc::epsilon_too_large: return "epsilon-too-large";
        case Errc::parse_error: return "parse-error";
        case Errc::internal: return "internal";
    }
    return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational make_rational(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view num = s;
    std::string_view den = "1";
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = trim(s.substr(0, slash));
        den = trim(s.substr(slash + 1));
    }
    if (!all_digits(num) || !all_digits(den))
        throw Error(Errc::parse_error, "malformed rational '" + std::string(text) + "'");
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (d == 0) throw Error(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    if (negative) q = -q;
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational pow(const Rational& q, int k) {
    if (k < 0) {
        if (q == 0) throw Error(Errc::not_invertible, "0 raised to a negative power");
        return pow(Rational(1) / q, -k);
    }
    Integer num;
    Integer den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(k));
    return Rational(num, den);  // powers of coprime integers stay coprime
}

std::string to_string(const ExtendedInt& v) {
    return v.is_infinite() ? std::string("inf") : std::to_string(v.value());
}

ExtendedInt parse_extended_int(std::string_view text) {
    std::string_view s = trim(text);
    if (s == "inf") return ExtendedInt::infinity();
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw Error(Errc::parse_error, "expected an integer or 'inf', got '" + std::string(text) + "'");
    return ExtendedInt(value);
}

std::ostream& operator<<(std::ostream& os, const ExtendedInt& v) { return os << to_string(v); }

}  // namespace qmdp
