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

#include "qmdp/kappa.hpp"

#include <algorithm>

#include "qmdp/error.hpp"

namespace qmdp {

Rank KappaRanking::min() const noexcept {
    Rank best = Rank::infinity();
    for (const auto& r : ranks) best = std::min(best, r);
    return best;
}

std::optional<std::string> validate_kappa(const KappaRanking& k) {
    if (k.size() == 0) return "ranking over an empty outcome set";
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i].is_finite() && k[i].value() < 0)
            return "outcome " + std::to_string(i) + " has negative rank " + std::to_string(k[i].value());
    if (k.min() != Rank(0)) return "no outcome has rank 0";
    return std::nullopt;
}

std::optional<std::string> validate_distribution(const QualitativeDistribution& dist) {
    if (dist.masses.empty()) return "distribution over an empty outcome set";
    Series total(dist.max_degree);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i].max_degree() != dist.max_degree)
            return "mass " + std::to_string(i) + " has truncation degree " +
                   std::to_string(dist[i].max_degree()) + ", expected " + std::to_string(dist.max_degree);
        if (dist[i].sign() < 0) return "mass " + std::to_string(i) + " is negative: " + to_string(dist[i]);
        total += dist[i];
    }
    if (total != Series::constant(1, dist.max_degree)) return "masses sum to " + to_string(total) + ", not 1";
    return std::nullopt;
}

RankCounts compute_counts(const KappaRanking& k) {
    RankCounts counts;
    for (const auto& r : k.ranks)
        if (r.is_finite()) ++counts.n[r.value()];
    // Only occupied ranks contribute to the recurrence, so running it over the
    // occupied ranks in ascending order visits every term it needs.
    Integer running = 0;
    for (const auto& [rank, count] : counts.n) {
        Integer weight = rank == 0 ? Integer(1) : running;
        counts.big_n[rank] = weight;
        running += weight;
    }
    return counts;
}

QualitativeDistribution embed(const KappaRanking& k, int max_degree) {
    if (auto violation = validate_kappa(k)) throw Error(Errc::model_validation, "invalid kappa ranking: " + *violation);
    RankCounts counts = compute_counts(k);
    const int top = counts.n.rbegin()->first;
    if (top > max_degree)
        throw Error(Errc::truncation_too_small, "rank " + std::to_string(top) + " exceeds truncation degree " +
                                                    std::to_string(max_degree));

    // One shape per occupied rank; outcomes of equal rank share it.
    std::map<int, Series> shape;
    for (const auto& [rank, count] : counts.n) {
        std::vector<Series::Term> terms{{rank, Rational(1)}};
        for (auto it = counts.n.upper_bound(rank); it != counts.n.end(); ++it) terms.emplace_back(it->first, -1);
        Rational weight(counts.big_n[rank], count);
        weight.canonicalize();
        shape.emplace(rank, weight * Series::from_terms(std::move(terms), max_degree));
    }

    QualitativeDistribution dist;
    dist.max_degree = max_degree;
    dist.masses.reserve(k.size());
    for (const auto& r : k.ranks) dist.masses.push_back(r.is_finite() ? shape.at(r.value()) : Series(max_degree));
    return dist;
}

KappaRanking order_of(const QualitativeDistribution& dist) {
    KappaRanking k;
    k.ranks.reserve(dist.size());
    for (const auto& m : dist.masses) k.ranks.push_back(m.order());
    return k;
}

}  // namespace qmdp
