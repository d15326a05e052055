#pragma once
// Experiment protocol: random train/validation/test realizations, subspace
// ensembles, all combination rules scored against the members' mean accuracy,
// and the weighted Borda ranking that compares rules across experiment cells.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wmr/classifiers.hpp"
#include "wmr/combiners.hpp"
#include "wmr/core_types.hpp"
#include "wmr/subspace.hpp"

namespace wmr {

struct ExperimentPlan {
    std::string name;
    std::string dataset_name;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double validation_fraction = 0.3;
    std::vector<int> k_splits{5, 7};
    ClassifierParams classifier = WknnParams{};
    std::vector<RuleKind> rules{std::begin(kAllRules), std::end(kAllRules)};
    std::size_t n_realizations = 10;
    std::uint64_t rng_seed = 0;
    std::size_t lae_bins = kAutoBins;
};

/// Throws ContractError describing the first invalid field.
void validate_plan(const ExperimentPlan& plan);

struct RealizationSplit {
    std::vector<std::size_t> member_train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Index partition for one realization; depends only on (rng_seed, index).
RealizationSplit split_indices(std::size_t n, const ExperimentPlan& plan, std::size_t realization_index);

struct SplitData {
    Dataset train;       // member-training portion
    Dataset validation;  // competence / LAE / LSE fitting
    Dataset test;
};

SplitData split_realization(const Dataset& data, const ExperimentPlan& plan, std::size_t realization_index);

/// 100 * matches / n.
double accuracy(std::span<const ClassLabel> predictions, std::span<const ClassLabel> truth);

/// Everything produced by one realization of one (plan, K) cell.
struct RealizationResult {
    std::size_t index = 0;
    int k = 0;
    SubspacePartition partition;
    std::vector<TrainedClassifier> members;
    ValidationFit fit;
    std::vector<double> member_accuracies;  // on the test slice
    double member_mean_accuracy = 0.0;
    std::map<RuleKind, double> rule_accuracies;
};

RealizationResult run_realization(const Dataset& data, const ExperimentPlan& plan, int k,
                                  std::size_t realization_index);

struct CellResult {
    std::string dataset;
    std::string classifier;
    int k = 0;
    RuleKind rule = RuleKind::SimpleMajority;
    double mean_improvement = 0.0;  // ensemble_accuracy - member_mean_accuracy
    double ensemble_accuracy = 0.0;
    double member_mean_accuracy = 0.0;
    double member_mean_accuracy_sd = 0.0;  // across realizations
    double member_max_accuracy = 0.0;
    double member_max_accuracy_sd = 0.0;
    std::size_t realizations = 0;
};

struct CellOptions {
    std::size_t jobs = 1;
    /// Called once per finished realization, possibly from a worker thread.
    std::function<void(const RealizationResult&)> on_realization;
};

/// One CellResult per plan rule, in plan order, averaged over realizations.
std::vector<CellResult> run_cell(const Dataset& data, const ExperimentPlan& plan, int k,
                                 const CellOptions& options = {});

/// Test accuracy of one classifier on all features, trained on the whole
/// training slice (member-train plus validation).
double single_classifier_accuracy(const Dataset& data, const ExperimentPlan& plan,
                                  std::size_t realization_index);

struct ColumnKey {
    std::string dataset;
    std::string classifier;
    int k = 0;

    friend auto operator<=>(const ColumnKey&, const ColumnKey&) = default;
};

struct BordaPoints {
    ColumnKey column;
    RuleKind rule = RuleKind::SimpleMajority;
    int points = 0;
};

struct RuleTotal {
    RuleKind rule = RuleKind::SimpleMajority;
    int sum = 0;
    double mean = 0.0;
    double stdev = 0.0;  // sample standard deviation over columns
    std::size_t columns = 0;
};

struct RankingTable {
    std::vector<CellResult> cells;     // sorted by column, then rule
    std::vector<BordaPoints> points;   // same order as cells
    std::vector<RuleTotal> totals;     // best first: sum desc, then rule order
};

inline constexpr int kTopBordaPoints = 10;

/// Points per (dataset, classifier, K) column: 10 for the best improvement,
/// one less for each lower distinct improvement; exact ties share points.
RankingTable wborda_rank(std::vector<CellResult> cells);

/// Gaussian-assumption Bhattacharyya distance between the two classes,
/// covariances regularized by 1e-6 * trace / d.
double bhattacharyya_distance(const Dataset& data);

/// Runs body(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

}  // namespace wmr
