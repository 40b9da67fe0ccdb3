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

#include <compare>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmdp/rational.hpp"

namespace qmdp {

inline constexpr int kDefaultMaxDegree = 16;

/**
 * Truncated two-sided formal series in an infinitesimal e with exact
 * rational coefficients:
 *
 *     s = sum_k a_k e^k,   k in [order(s), max_degree]
 *
 * Terms are kept sorted by exponent with no zero coefficient and no exponent
 * above max_degree. Every arithmetic result is truncated at the shared
 * max_degree; mixing degrees is an error. Exponents may be negative, but a
 * product or inverse whose order falls below -2*max_degree is rejected as an
 * underflow.
 *
 * The order is the one where s > 0 iff the coefficient at the lowest exponent
 * is positive, i.e. e is a positive infinitesimal.
 */
class Series {
public:
    using Term = std::pair<int, Rational>;

    /// The zero series.
    explicit Series(int max_degree = kDefaultMaxDegree);

    /// Merges duplicate exponents, drops zero coefficients and exponents
    /// above max_degree.
    static Series from_terms(std::vector<Term> terms, int max_degree = kDefaultMaxDegree);
    static Series constant(const Rational& c, int max_degree = kDefaultMaxDegree);
    static Series monomial(const Rational& c, int exponent, int max_degree = kDefaultMaxDegree);

    int max_degree() const noexcept { return max_degree_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::span<const Term> terms() const noexcept { return terms_; }
    Rational coeff(int exponent) const;

    OrderOfMagnitude order() const noexcept;
    /// Coefficient at order(); throws Error{zero_series} on the zero series.
    const Rational& leading_coeff() const;
    /// -1, 0 or +1 under the series order.
    int sign() const noexcept;

    /// Same degree, same terms.
    bool operator==(const Series& other) const = default;

    Series operator-() const;
    Series& operator+=(const Series& other);
    Series& operator-=(const Series& other);
    Series& operator*=(const Series& other);

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(const Rational& q, const Series& s);

private:
    void check_degree(const Series& other) const;

    std::vector<Term> terms_;
    int max_degree_;
};

Series scale(const Rational& q, const Series& s);

/// Total order; Error{degree_mismatch} when the truncation degrees differ.
std::strong_ordering compare(const Series& s, const Series& t);

inline bool operator<(const Series& s, const Series& t) { return compare(s, t) < 0; }
inline bool operator>(const Series& s, const Series& t) { return compare(s, t) > 0; }
inline bool operator<=(const Series& s, const Series& t) { return compare(s, t) <= 0; }
inline bool operator>=(const Series& s, const Series& t) { return compare(s, t) >= 0; }

/// Multiplicative inverse: factor out the leading monomial, then expand the
/// geometric series of the unit part. For order(s) >= 0, s * inverse(s) == 1
/// holds exactly within truncation.
Series inverse(const Series& s);

/// sum_k |a_k| rho^-k over the stored terms; rho must exceed 1.
Rational norm(const Series& s, const Rational& rho);

/// sum_k a_k eps0^k; eps0 must lie in (0, 1).
Rational evaluate(const Series& s, const Rational& eps0);

/// Canonical rendering, e.g. `1/2 - 1/2*e - 1/2*e^5`; zero renders as `0`.
std::string to_string(const Series& s);

/// Parses the canonical rendering, tolerating arbitrary whitespace and the
/// shorthand forms `e`, `-e^2`, `3e` and `e^-1`.
Series parse_series(std::string_view text, int max_degree = kDefaultMaxDegree);

std::ostream& operator<<(std::ostream& os, const Series& s);

}  // namespace qmdp
