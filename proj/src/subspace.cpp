#include "wmr/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wmr {

double anova_f_statistic(const Dataset& data, std::size_t feature) {
    double sum[2] = {0.0, 0.0};
    std::size_t n[2] = {0, 0};
    for (std::size_t s = 0; s < data.size(); ++s) {
        const int c = data.label(s) == ClassLabel::Omega2 ? 1 : 0;
        sum[c] += data.sample(s)[feature];
        n[c] += 1;
    }
    if (n[0] == 0 || n[1] == 0) throw DataError("feature ranking needs both classes present");
    const double mean[2] = {sum[0] / static_cast<double>(n[0]), sum[1] / static_cast<double>(n[1])};
    const double grand = (sum[0] + sum[1]) / static_cast<double>(n[0] + n[1]);

    double within = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const int c = data.label(s) == ClassLabel::Omega2 ? 1 : 0;
        const double d = data.sample(s)[feature] - mean[c];
        within += d * d;
    }
    double between = 0.0;
    for (int c = 0; c < 2; ++c) between += static_cast<double>(n[c]) * (mean[c] - grand) * (mean[c] - grand);

    const double dof_within = static_cast<double>(n[0] + n[1]) - 2.0;
    if (between <= 0.0) return 0.0;
    if (within <= 0.0 || dof_within <= 0.0) return std::numeric_limits<double>::max();
    return between / (within / dof_within);
}

FeatureRanking rank_features(const Dataset& train) {
    if (!train.has_both_classes()) throw DataError("feature ranking needs both classes present");
    FeatureRanking ranking;
    ranking.scores.reserve(train.dimension());
    for (std::size_t f = 0; f < train.dimension(); ++f) {
        const double sig = std::max(anova_f_statistic(train, f), kSignificanceFloor);
        ranking.scores.push_back({f, sig, std::log(sig)});
    }
    std::stable_sort(ranking.scores.begin(), ranking.scores.end(),
                     [](const FeatureScore& a, const FeatureScore& b) { return a.significance > b.significance; });
    return ranking;
}

SubspacePartition fair_partition(const FeatureRanking& ranking, std::size_t k) {
    const std::size_t d = ranking.scores.size();
    if (k == 0) throw ContractError("partition into zero groups");
    if (k > d) {
        throw ContractError("cannot split " + std::to_string(d) + " features into " + std::to_string(k) + " groups");
    }

    // Units: top/bottom pairs in rank order, then the middle feature if D is odd.
    // Each split pair adds one unit, so the innermost `split` pairs become singles.
    const std::size_t pairs = d / 2;
    const bool has_middle = d % 2 == 1;
    const std::size_t base = pairs + (has_middle ? 1 : 0);
    const std::size_t split = k > base ? k - base : 0;
    std::vector<std::vector<std::size_t>> units;
    for (std::size_t r = 0; r < pairs; ++r) {
        if (r < pairs - split) {
            units.push_back({r, d - 1 - r});
        } else {
            units.push_back({r});
            units.push_back({d - 1 - r});
        }
    }
    if (has_middle) units.push_back({d / 2});

    SubspacePartition part;
    part.groups.assign(k, {});
    part.group_scores.assign(k, 0.0);
    for (const auto& unit : units) {
        double weight = 0.0;
        for (std::size_t r : unit) weight += ranking.scores[r].log_significance;

        std::size_t target = k;
        for (std::size_t g = 0; g < k && target == k; ++g) {
            if (part.groups[g].empty()) target = g;
        }
        if (target == k) {
            target = 0;
            for (std::size_t g = 1; g < k; ++g) {
                const bool better = weight >= 0.0 ? part.group_scores[g] < part.group_scores[target]
                                                  : part.group_scores[g] > part.group_scores[target];
                if (better) target = g;
            }
        }
        for (std::size_t r : unit) part.groups[target].push_back(ranking.scores[r].feature);
        part.group_scores[target] += weight;
    }
    for (auto& g : part.groups) std::sort(g.begin(), g.end());
    return part;
}

}  // namespace wmr
