#pragma once
// Base classifiers for the ensembles: weighted k-NN and CART trees.
// Every model is trained on a subset of the dataset's features and accepts
// full-dimension samples at prediction time, projecting internally.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wmr/core_types.hpp"

namespace wmr {

enum class DistanceMetric : std::uint8_t {
    Euclidean,
    Cityblock,
    Minkowski,
    Cosine,
    Correlation,
    Mahalanobis,
    Chebychev,
    Hamming,
};

enum class Weighting : std::uint8_t { Constant, Linear, Gaussian };

struct WknnParams {
    int k = 1;
    DistanceMetric distance = DistanceMetric::Euclidean;
    double minkowski_p = 3.0;
    Weighting weighting = Weighting::Constant;

    friend bool operator==(const WknnParams&, const WknnParams&) = default;
};

enum class SplitCriterion : std::uint8_t { Gini, Twoing, Deviance };
enum class TreeMode : std::uint8_t { Classification, Regression };

struct CartParams {
    SplitCriterion criterion = SplitCriterion::Gini;
    int min_split = 10;
    TreeMode mode = TreeMode::Classification;

    friend bool operator==(const CartParams&, const CartParams&) = default;
};

using ClassifierParams = std::variant<WknnParams, CartParams>;

ClassifierKind kind_of(const ClassifierParams& params) noexcept;

const char* to_string(DistanceMetric metric) noexcept;
const char* to_string(Weighting weighting) noexcept;
const char* to_string(SplitCriterion criterion) noexcept;
const char* to_string(TreeMode mode) noexcept;
DistanceMetric distance_metric_from_string(const std::string& text);
Weighting weighting_from_string(const std::string& text);
SplitCriterion split_criterion_from_string(const std::string& text);
TreeMode tree_mode_from_string(const std::string& text);

/// Configuration of one ensemble: number of feature groups, member type,
/// member hyperparameters and the seed driving data splits.
struct EnsembleSpec {
    int k_splits = 5;
    ClassifierParams classifier = WknnParams{};
    std::uint64_t rng_seed = 0;
};

struct Prediction {
    double soft = 0.0;
    ClassLabel hard = ClassLabel::Omega1;
};

/// Distance between two equal-length vectors under one metric. Mahalanobis
/// needs the (regularized) inverse covariance, row-major d x d.
class DistanceFunction {
public:
    DistanceFunction() = default;
    DistanceFunction(DistanceMetric metric, double minkowski_p = 3.0,
                     std::vector<double> inverse_covariance = {});

    double operator()(std::span<const double> a, std::span<const double> b) const;

    DistanceMetric metric() const noexcept { return metric_; }
    double minkowski_p() const noexcept { return p_; }
    const std::vector<double>& inverse_covariance() const noexcept { return inv_cov_; }

private:
    DistanceMetric metric_ = DistanceMetric::Euclidean;
    double p_ = 3.0;
    std::vector<double> inv_cov_;
};

/// Regularized inverse of the sample covariance of `rows`: (S + lambda I)^-1
/// with lambda = 1e-6 * trace(S) / d.
std::vector<double> regularized_inverse_covariance(const std::vector<Sample>& rows);

struct WknnModel {
    WknnParams params;
    std::vector<Sample> points;  // projected training samples
    std::vector<ClassLabel> labels;
    DistanceFunction distance;

    Prediction predict(std::span<const double> projected) const;
};

/// Neighbor weights for ascending distances of the k nearest neighbors.
std::vector<double> neighbor_weights(Weighting weighting, std::span<const double> sorted_distances);

struct CartNode {
    int feature = -1;  // position within the model's feature_indices; -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t count_omega1 = 0;
    std::size_t count_omega2 = 0;

    bool is_leaf() const noexcept { return feature < 0; }
};

struct CartModel {
    CartParams params;
    std::vector<CartNode> nodes;  // nodes[0] is the root

    Prediction predict(std::span<const double> projected) const;
    double leaf_value(const CartNode& leaf) const;
};

/// Impurity-style score of a node with the given class counts. Gini and
/// twoing use the Gini index; deviance is -2 * sum n_j ln(n_j / n).
double node_impurity(SplitCriterion criterion, std::size_t n1, std::size_t n2);

/// Improvement of splitting a node into (left1, left2) / (right1, right2).
double split_improvement(SplitCriterion criterion, std::size_t left1, std::size_t left2,
                         std::size_t right1, std::size_t right2);

class TrainedClassifier {
public:
    using Model = std::variant<WknnModel, CartModel>;

    TrainedClassifier(Model model, std::vector<std::size_t> feature_indices,
                      std::size_t input_dimension);

    ClassifierKind kind() const noexcept;
    const std::vector<std::size_t>& feature_indices() const noexcept { return features_; }
    std::size_t input_dimension() const noexcept { return input_dimension_; }
    const Model& model() const noexcept { return model_; }

    /// Throws ContractError when the sample dimension differs from training.
    Prediction predict(std::span<const double> sample) const;

private:
    Model model_;
    std::vector<std::size_t> features_;
    std::size_t input_dimension_;
};

TrainedClassifier train_wknn(const Dataset& train, std::span<const std::size_t> feature_indices,
                             const WknnParams& params);
TrainedClassifier train_cart(const Dataset& train, std::span<const std::size_t> feature_indices,
                             const CartParams& params);
TrainedClassifier train_classifier(const Dataset& train,
                                   std::span<const std::size_t> feature_indices,
                                   const ClassifierParams& params);

/// Requires a WKNN model.
Prediction predict_wknn(const TrainedClassifier& model, std::span<const double> sample);
/// Requires a CART model.
Prediction predict_cart(const TrainedClassifier& model, std::span<const double> sample);

/// Member i's predictions on every sample of `data`, in model order.
ClassifierOutputs ensemble_outputs(std::span<const TrainedClassifier> models, const Dataset& data);

}  // namespace wmr
