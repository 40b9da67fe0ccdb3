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

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

namespace qmdp {

// GMP keeps every mpq_class result canonical (lowest terms, positive
// denominator) as long as values are built through its arithmetic or through
// make_rational / parse_rational below.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Accepts `p`, `-p`, `p/q` with optional surrounding whitespace.
/// Throws Error{parse_error} on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// `p/q` in lowest terms, or just `p` when the denominator is one.
std::string to_string(const Rational& q);

/// q^k for any integer k; q must be nonzero when k < 0.
Rational pow(const Rational& q, int k);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Integers extended with +infinity. Used for orders of magnitude (any sign)
/// and kappa ranks (non-negative).
class ExtendedInt {
public:
    constexpr ExtendedInt() = default;
    constexpr ExtendedInt(int value) : value_(value) {}  // NOLINT: implicit by intent

    static constexpr ExtendedInt infinity() {
        ExtendedInt r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_finite() const noexcept { return !infinite_; }
    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr int value() const noexcept { return value_; }

    constexpr bool operator==(const ExtendedInt& o) const noexcept {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    constexpr std::strong_ordering operator<=>(const ExtendedInt& o) const noexcept {
        if (infinite_ || o.infinite_) return infinite_ <=> o.infinite_;
        return value_ <=> o.value_;
    }

    friend constexpr ExtendedInt operator+(ExtendedInt a, ExtendedInt b) noexcept {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtendedInt(a.value_ + b.value_);
    }

private:
    int value_ = 0;
    bool infinite_ = false;
};

using Rank = ExtendedInt;
using OrderOfMagnitude = ExtendedInt;

/// Decimal integer or the token `inf`.
std::string to_string(const ExtendedInt& v);
ExtendedInt parse_extended_int(std::string_view text);

std::ostream& operator<<(std::ostream& os, const ExtendedInt& v);

}  // namespace qmdp
