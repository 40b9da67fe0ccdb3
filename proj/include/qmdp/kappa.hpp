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

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmdp/rational.hpp"
#include "qmdp/series.hpp"

namespace qmdp {

/// Disbelief ranks over outcomes 0..size()-1. Rank 0 is plausible, larger
/// ranks are increasingly surprising and infinity marks impossibility.
struct KappaRanking {
    std::vector<Rank> ranks;

    KappaRanking() = default;
    explicit KappaRanking(std::vector<Rank> r) : ranks(std::move(r)) {}
    KappaRanking(std::initializer_list<Rank> r) : ranks(r) {}

    std::size_t size() const noexcept { return ranks.size(); }
    const Rank& operator[](std::size_t i) const { return ranks[i]; }
    Rank& operator[](std::size_t i) { return ranks[i]; }

    /// Minimum over all outcomes (infinity when empty).
    Rank min() const noexcept;

    bool operator==(const KappaRanking&) const = default;
    auto operator<=>(const KappaRanking&) const = default;
};

/// A qualitative probability: one non-negative series mass per outcome,
/// summing to exactly 1.
struct QualitativeDistribution {
    std::vector<Series> masses;
    int max_degree = kDefaultMaxDegree;

    std::size_t size() const noexcept { return masses.size(); }
    const Series& operator[](std::size_t i) const { return masses[i]; }

    bool operator==(const QualitativeDistribution&) const = default;
};

/// Empty when k is a ranking; otherwise a description of the first violation.
std::optional<std::string> validate_kappa(const KappaRanking& k);

/// Empty when every mass is non-negative and the masses sum to 1.
std::optional<std::string> validate_distribution(const QualitativeDistribution& dist);

/// n[m]: how many outcomes carry rank m. big_n[m]: the integer weight used by
/// the embedding, N_0 = 1 and N_k = sum_{j<k, n_j != 0} N_j. Both maps are
/// keyed by the finite ranks that occur.
struct RankCounts {
    std::map<int, int> n;
    std::map<int, Integer> big_n;
};

RankCounts compute_counts(const KappaRanking& k);

/**
 * Maximum-entropy embedding of a ranking into a qualitative probability.
 * An outcome of finite rank r receives
 *
 *     (N_r / n_r) * (e^r - sum_{j > r, n_j != 0} e^j)
 *
 * and an outcome of infinite rank receives 0. Equally ranked outcomes get
 * equal mass, every finite-rank mass has order exactly r with a positive
 * leading coefficient, and the masses sum to 1.
 *
 * Throws Error{model_validation} for an invalid ranking and
 * Error{truncation_too_small} when max_degree is below the largest finite rank.
 */
QualitativeDistribution embed(const KappaRanking& k, int max_degree = kDefaultMaxDegree);

/// Outcome-wise order of magnitude.
KappaRanking order_of(const QualitativeDistribution& dist);

}  // namespace qmdp
