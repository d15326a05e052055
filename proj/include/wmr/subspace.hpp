#pragma once
// Ranked feature subspaces: features are scored by their one-way ANOVA
// F-statistic against the class label (the single-response case of MANOVA),
// then split into K disjoint groups of roughly equal summed log-significance
// by pairing the best remaining feature with the worst one.

#include <cstddef>
#include <vector>

#include "wmr/core_types.hpp"

namespace wmr {

inline constexpr double kSignificanceFloor = 1e-12;

struct FeatureScore {
    std::size_t feature = 0;
    double significance = 0.0;
    double log_significance = 0.0;
};

struct FeatureRanking {
    std::vector<FeatureScore> scores;  // descending significance, ties by index
};

struct SubspacePartition {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<double> group_scores;  // sum of member log-significances
};

/// F-statistic of one feature column against two-class labels.
double anova_f_statistic(const Dataset& data, std::size_t feature);

FeatureRanking rank_features(const Dataset& train);

/// Pairs rank r with rank D-1-r and hands each pair to a group in turn:
/// empty groups first, then the lightest group for a non-negative pair
/// weight or the heaviest for a negative one. An odd middle feature is
/// placed last by the same rule. When there are fewer units than groups,
/// the innermost pairs are split into single features.
SubspacePartition fair_partition(const FeatureRanking& ranking, std::size_t k);

}  // namespace wmr
