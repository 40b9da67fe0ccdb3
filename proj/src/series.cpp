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

#include "qmdp/series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qmdp/error.hpp"

namespace qmdp {

namespace {

void check_underflow(int order, int max_degree) {
    if (order < -2 * max_degree)
        throw Error(Errc::underflow, "series order " + std::to_string(order) + " falls below -2*D = " +
                                        std::to_string(-2 * max_degree));
}

// Dense accumulator over exponents [lo, hi]; the natural home for products.
class DenseWindow {
public:
    DenseWindow(int lo, int hi) : lo_(lo), coeffs_(static_cast<std::size_t>(std::max(0, hi - lo + 1))) {}

    Rational& at(int exponent) { return coeffs_[static_cast<std::size_t>(exponent - lo_)]; }

    std::vector<Series::Term> take_terms() {
        std::vector<Series::Term> out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) out.emplace_back(lo_ + static_cast<int>(i), std::move(coeffs_[i]));
        return out;
    }

private:
    int lo_;
    std::vector<Rational> coeffs_;
};

}  // namespace

Series::Series(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw Error(Errc::internal, "max_degree must be non-negative");
}

Series Series::from_terms(std::vector<Term> terms, int max_degree) {
    Series s(max_degree);
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& [exponent, c] : terms) {
        if (exponent > max_degree) break;
        if (!s.terms_.empty() && s.terms_.back().first == exponent)
            s.terms_.back().second += c;
        else
            s.terms_.emplace_back(exponent, std::move(c));
    }
    std::erase_if(s.terms_, [](const Term& t) { return t.second == 0; });
    return s;
}

Series Series::constant(const Rational& c, int max_degree) { return from_terms({{0, c}}, max_degree); }

Series Series::monomial(const Rational& c, int exponent, int max_degree) {
    return from_terms({{exponent, c}}, max_degree);
}

Rational Series::coeff(int exponent) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                               [](const Term& t, int e) { return t.first < e; });
    if (it != terms_.end() && it->first == exponent) return it->second;
    return 0;
}

OrderOfMagnitude Series::order() const noexcept {
    if (terms_.empty()) return OrderOfMagnitude::infinity();
    return terms_.front().first;
}

const Rational& Series::leading_coeff() const {
    if (terms_.empty()) throw Error(Errc::zero_series, "leading coefficient of the zero series");
    return terms_.front().second;
}

int Series::sign() const noexcept {
    if (terms_.empty()) return 0;
    return sgn(terms_.front().second);
}

void Series::check_degree(const Series& other) const {
    if (max_degree_ != other.max_degree_)
        throw Error(Errc::degree_mismatch, "series truncation degrees differ: " + std::to_string(max_degree_) +
                                               " vs " + std::to_string(other.max_degree_));
}

Series Series::operator-() const {
    Series r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

Series& Series::operator+=(const Series& other) {
    check_degree(other);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            Rational c = a->second + b->second;
            if (c != 0) merged.emplace_back(a->first, std::move(c));
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

Series& Series::operator-=(const Series& other) { return *this += -other; }

Series& Series::operator*=(const Series& other) { return *this = *this * other; }

Series operator*(const Series& a, const Series& b) {
    a.check_degree(b);
    const int d = a.max_degree_;
    if (a.is_zero() || b.is_zero()) return Series(d);
    const int lo = a.terms_.front().first + b.terms_.front().first;
    if (lo > d) return Series(d);
    check_underflow(lo, d);
    DenseWindow acc(lo, d);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            if (ea + eb > d) break;
            acc.at(ea + eb) += ca * cb;
        }
    }
    Series r(d);
    r.terms_ = acc.take_terms();
    return r;
}

Series operator*(const Rational& q, const Series& s) {
    Series r(s.max_degree_);
    if (q == 0) return r;
    r.terms_.reserve(s.terms_.size());
    for (const auto& [e, c] : s.terms_) r.terms_.emplace_back(e, q * c);
    return r;
}

Series scale(const Rational& q, const Series& s) { return q * s; }

std::strong_ordering compare(const Series& s, const Series& t) {
    const int sign = (s - t).sign();
    if (sign < 0) return std::strong_ordering::less;
    if (sign > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Series inverse(const Series& s) {
    if (s.is_zero()) throw Error(Errc::not_invertible, "the zero series has no inverse");
    const int d = s.max_degree();
    const int m = s.order().value();
    check_underflow(-m, d);
    const Rational c_inv = Rational(1) / s.leading_coeff();

    // s = c e^m (1 + u) with u having only positive exponents; we need
    // w = (1 + u)^-1 for exponents j with j <= d and j - m <= d.
    const int jmax = std::min(d, d + m);
    if (jmax < 0) return Series(d);  // every term of the inverse lies above the truncation
    std::vector<Rational> u(static_cast<std::size_t>(jmax) + 1);
    for (const auto& [e, c] : s.terms()) {
        int j = e - m;
        if (j > jmax) break;
        if (j > 0) u[static_cast<std::size_t>(j)] = c * c_inv;
    }
    std::vector<Rational> w(static_cast<std::size_t>(jmax) + 1);
    w[0] = 1;
    for (int j = 1; j <= jmax; ++j) {
        Rational acc = 0;
        for (int i = 1; i <= j; ++i)
            if (u[i] != 0) acc += u[i] * w[j - i];
        w[j] = -acc;
    }
    std::vector<Series::Term> terms;
    for (int j = 0; j <= jmax; ++j)
        if (w[j] != 0) terms.emplace_back(j - m, c_inv * w[j]);
    return Series::from_terms(std::move(terms), d);
}

Rational norm(const Series& s, const Rational& rho) {
    if (rho <= 1) throw Error(Errc::invalid_rho, "norm requires rho > 1, got " + to_string(rho));
    Rational total = 0;
    for (const auto& [e, c] : s.terms()) total += abs(c) * pow(rho, -e);
    return total;
}

Rational evaluate(const Series& s, const Rational& eps0) {
    if (eps0 <= 0 || eps0 >= 1)
        throw Error(Errc::invalid_epsilon, "evaluation point must lie in (0, 1), got " + to_string(eps0));
    Rational total = 0;
    for (const auto& [e, c] : s.terms()) total += c * pow(eps0, e);
    return total;
}

std::string to_string(const Series& s) {
    if (s.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : s.terms()) {
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        out += to_string(abs(c));
        if (e == 1)
            out += "*e";
        else if (e != 0)
            out += "*e^" + std::to_string(e);
    }
    return out;
}

namespace {

class SeriesParser {
public:
    explicit SeriesParser(std::string_view text) : text_(text) {}

    std::vector<Series::Term> parse() {
        std::vector<Series::Term> terms;
        skip_ws();
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = get() == '-';
            skip_ws();
        }
        while (true) {
            auto term = parse_term();
            if (negative) term.second = -term.second;
            terms.push_back(std::move(term));
            skip_ws();
            if (at_end()) break;
            char op = get();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            negative = op == '-';
            skip_ws();
        }
        return terms;
    }

private:
    Series::Term parse_term() {
        Rational coeff = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            Integer num = parse_digits();
            Integer den = 1;
            skip_ws();
            if (peek() == '/') {
                get();
                skip_ws();
                den = parse_digits();
                if (den == 0) fail("zero denominator");
            }
            coeff = Rational(num, den);
            coeff.canonicalize();
            have_coeff = true;
            skip_ws();
            if (peek() == '*') {
                get();
                skip_ws();
                if (peek() != 'e') fail("expected 'e' after '*'");
            }
        }
        if (peek() != 'e') {
            if (!have_coeff) fail("expected a coefficient or 'e'");
            return {0, coeff};
        }
        get();
        skip_ws();
        int exponent = 1;
        if (peek() == '^') {
            get();
            skip_ws();
            bool neg = false;
            if (peek() == '-' || peek() == '+') {
                neg = get() == '-';
                skip_ws();
            }
            Integer e = parse_digits();
            if (!e.fits_sint_p()) fail("exponent out of range");
            exponent = static_cast<int>(e.get_si());
            if (neg) exponent = -exponent;
        }
        return {exponent, coeff};
    }

    Integer parse_digits() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) get();
        if (start == pos_) fail("expected digits");
        return Integer(std::string(text_.substr(start, pos_ - start)), 10);
    }

    void skip_ws() {
        while (std::isspace(static_cast<unsigned char>(peek()))) get();
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    char get() { return text_[pos_++]; }

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(Errc::parse_error, "series '" + std::string(text_) + "', column " +
                                           std::to_string(pos_ + 1) + ": " + why);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Series parse_series(std::string_view text, int max_degree) {
    return Series::from_terms(SeriesParser(text).parse(), max_degree);
}

std::ostream& operator<<(std::ostream& os, const Series& s) { return os << to_string(s); }

}  // namespace qmdp
