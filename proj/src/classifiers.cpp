#include "wmr/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <Eigen/Dense>

namespace wmr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double xlogx_ratio(std::size_t count, std::size_t total) {
    if (count == 0) return 0.0;
    const double c = static_cast<double>(count);
    return c * std::log(c / static_cast<double>(total));
}

std::vector<double> project(std::span<const double> sample, std::span<const std::size_t> features) {
    std::vector<double> out(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) out[j] = sample[features[j]];
    return out;
}

void check_features(const Dataset& train, std::span<const std::size_t> features) {
    if (train.empty()) throw ContractError("training set is empty");
    if (features.empty()) throw ContractError("empty feature set");
    for (std::size_t f : features) {
        if (f >= train.dimension()) {
            throw ContractError("feature index " + std::to_string(f) + " out of range");
        }
    }
}

}  // namespace

ClassifierKind kind_of(const ClassifierParams& params) noexcept {
    return std::holds_alternative<WknnParams>(params) ? ClassifierKind::Wknn : ClassifierKind::Cart;
}

const char* to_string(DistanceMetric metric) noexcept {
    switch (metric) {
        case DistanceMetric::Euclidean: return "euclidean";
        case DistanceMetric::Cityblock: return "cityblock";
        case DistanceMetric::Minkowski: return "minkowski";
        case DistanceMetric::Cosine: return "cosine";
        case DistanceMetric::Correlation: return "correlation";
        case DistanceMetric::Mahalanobis: return "mahalanobis";
        case DistanceMetric::Chebychev: return "chebychev";
        case DistanceMetric::Hamming: return "hamming";
    }
    return "?";
}

const char* to_string(Weighting weighting) noexcept {
    switch (weighting) {
        case Weighting::Constant: return "constant";
        case Weighting::Linear: return "linear";
        case Weighting::Gaussian: return "gaussian";
    }
    return "?";
}

const char* to_string(SplitCriterion criterion) noexcept {
    switch (criterion) {
        case SplitCriterion::Gini: return "gini";
        case SplitCriterion::Twoing: return "twoing";
        case SplitCriterion::Deviance: return "deviance";
    }
    return "?";
}

const char* to_string(TreeMode mode) noexcept {
    return mode == TreeMode::Classification ? "classification" : "regression";
}

DistanceMetric distance_metric_from_string(const std::string& text) {
    for (auto m : {DistanceMetric::Euclidean, DistanceMetric::Cityblock, DistanceMetric::Minkowski,
                   DistanceMetric::Cosine, DistanceMetric::Correlation, DistanceMetric::Mahalanobis,
                   DistanceMetric::Chebychev, DistanceMetric::Hamming}) {
        if (text == to_string(m)) return m;
    }
    throw ContractError("unknown distance metric '" + text + "'");
}

Weighting weighting_from_string(const std::string& text) {
    if (text == "constant" || text == "none") return Weighting::Constant;
    if (text == "linear") return Weighting::Linear;
    if (text == "gaussian") return Weighting::Gaussian;
    throw ContractError("unknown weighting profile '" + text + "'");
}

SplitCriterion split_criterion_from_string(const std::string& text) {
    if (text == "gini") return SplitCriterion::Gini;
    if (text == "twoing") return SplitCriterion::Twoing;
    if (text == "deviance") return SplitCriterion::Deviance;
    throw ContractError("unknown split criterion '" + text + "'");
}

TreeMode tree_mode_from_string(const std::string& text) {
    if (text == "classification") return TreeMode::Classification;
    if (text == "regression") return TreeMode::Regression;
    throw ContractError("unknown tree mode '" + text + "'");
}

// ---------------------------------------------------------------------------
// Distances

DistanceFunction::DistanceFunction(DistanceMetric metric, double minkowski_p,
                                   std::vector<double> inverse_covariance)
    : metric_(metric), p_(minkowski_p), inv_cov_(std::move(inverse_covariance)) {
    if (metric_ == DistanceMetric::Minkowski && !(std::isfinite(p_) && p_ > 0.0)) {
        throw ContractError("Minkowski exponent must be finite and positive");
    }
}

double DistanceFunction::operator()(std::span<const double> a, std::span<const double> b) const {
    const std::size_t d = a.size();
    switch (metric_) {
        case DistanceMetric::Euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        }
        case DistanceMetric::Cityblock: {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += std::abs(a[i] - b[i]);
            return s;
        }
        case DistanceMetric::Minkowski: {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += std::pow(std::abs(a[i] - b[i]), p_);
            return std::pow(s, 1.0 / p_);
        }
        case DistanceMetric::Chebychev: {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s = std::max(s, std::abs(a[i] - b[i]));
            return s;
        }
        case DistanceMetric::Hamming: {
            std::size_t differ = 0;
            for (std::size_t i = 0; i < d; ++i) differ += a[i] != b[i] ? 1 : 0;
            return static_cast<double>(differ) / static_cast<double>(d);
        }
        case DistanceMetric::Cosine:
        case DistanceMetric::Correlation: {
            if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;
            double ma = 0.0, mb = 0.0;
            if (metric_ == DistanceMetric::Correlation) {
                ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(d);
                mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(d);
            }
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double x = a[i] - ma, y = b[i] - mb;
                dot += x * y;
                na += x * x;
                nb += y * y;
            }
            // zero (cosine) or constant (correlation) vector
            if (na == 0.0 || nb == 0.0) return 1.0;
            return std::max(0.0, 1.0 - dot / std::sqrt(na * nb));
        }
        case DistanceMetric::Mahalanobis: {
            if (inv_cov_.size() != d * d) {
                throw ContractError("Mahalanobis distance without a matching inverse covariance");
            }
            double q = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < d; ++j) row += inv_cov_[i * d + j] * (a[j] - b[j]);
                q += (a[i] - b[i]) * row;
            }
            return std::sqrt(std::max(0.0, q));
        }
    }
    return 0.0;
}

std::vector<double> regularized_inverse_covariance(const std::vector<Sample>& rows) {
    if (rows.empty()) throw ContractError("covariance of an empty sample set");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto d = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
    double lambda = 1e-6 * cov.trace() / static_cast<double>(d);
    if (!(lambda > 0.0)) lambda = 1e-12;
    cov.diagonal().array() += lambda;
    const Eigen::MatrixXd inv = cov.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    std::vector<double> out(static_cast<std::size_t>(d * d));
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) out[static_cast<std::size_t>(i * d + j)] = inv(i, j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weighted k-NN

std::vector<double> neighbor_weights(Weighting weighting, std::span<const double> sorted_distances) {
    const std::size_t k = sorted_distances.size();
    std::vector<double> w(k, 1.0);
    switch (weighting) {
        case Weighting::Constant:
            break;
        case Weighting::Linear:
            // rank 0 gets 1, the k-th neighbor gets 1/k
            for (std::size_t r = 0; r < k; ++r) {
                w[r] = static_cast<double>(k - r) / static_cast<double>(k);
            }
            break;
        case Weighting::Gaussian: {
            const double sigma = sorted_distances.back() / 2.0;
            if (sigma > 0.0) {
                for (std::size_t r = 0; r < k; ++r) {
                    const double z = sorted_distances[r] / sigma;
                    w[r] = std::exp(-z * z);
                }
            }
            break;
        }
    }
    return w;
}

Prediction WknnModel::predict(std::span<const double> projected) const {
    const std::size_t n = points.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = {distance(projected, points[i]), i};
    const auto k = static_cast<std::size_t>(params.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<double> sorted(k);
    for (std::size_t r = 0; r < k; ++r) sorted[r] = dist[r].first;
    const auto w = neighbor_weights(params.weighting, sorted);
    // linear weights summed as the integers k - r so exact ties stay exact

    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        const double wr = params.weighting == Weighting::Linear ? static_cast<double>(k - r) : w[r];
        den += wr;
        if (labels[dist[r].second] == ClassLabel::Omega2) num += wr;
    }
    const double soft = std::clamp(num / den, 0.0, 1.0);
    return {soft, hard_from_soft(soft)};
}

TrainedClassifier train_wknn(const Dataset& train, std::span<const std::size_t> feature_indices,
                             const WknnParams& params) {
    check_features(train, feature_indices);
    if (params.k < 1) throw ContractError("k must be positive");
    if (static_cast<std::size_t>(params.k) > train.size()) {
        throw ContractError("k=" + std::to_string(params.k) + " exceeds training size " +
                            std::to_string(train.size()));
    }
    WknnModel model;
    model.params = params;
    model.labels = train.labels();
    model.points.reserve(train.size());
    for (const auto& row : train.samples()) model.points.push_back(project(row, feature_indices));

    std::vector<double> inv_cov;
    if (params.distance == DistanceMetric::Mahalanobis) {
        inv_cov = regularized_inverse_covariance(model.points);
    }
    model.distance = DistanceFunction(params.distance, params.minkowski_p, std::move(inv_cov));
    return TrainedClassifier(std::move(model),
                             std::vector<std::size_t>(feature_indices.begin(), feature_indices.end()),
                             train.dimension());
}

// ---------------------------------------------------------------------------
// CART

double node_impurity(SplitCriterion criterion, std::size_t n1, std::size_t n2) {
    const std::size_t n = n1 + n2;
    if (n == 0) return 0.0;
    if (criterion == SplitCriterion::Deviance) {
        return -2.0 * (xlogx_ratio(n1, n) + xlogx_ratio(n2, n));
    }
    const double p1 = static_cast<double>(n1) / static_cast<double>(n);
    const double p2 = static_cast<double>(n2) / static_cast<double>(n);
    return 1.0 - p1 * p1 - p2 * p2;
}

double split_improvement(SplitCriterion criterion, std::size_t left1, std::size_t left2,
                         std::size_t right1, std::size_t right2) {
    const std::size_t nl = left1 + left2, nr = right1 + right2, n = nl + nr;
    if (nl == 0 || nr == 0) return 0.0;
    switch (criterion) {
        case SplitCriterion::Gini: {
            const double pl = static_cast<double>(nl) / static_cast<double>(n);
            const double pr = static_cast<double>(nr) / static_cast<double>(n);
            return node_impurity(criterion, left1 + right1, left2 + right2) -
                   pl * node_impurity(criterion, left1, left2) -
                   pr * node_impurity(criterion, right1, right2);
        }
        case SplitCriterion::Twoing: {
            const double pl = static_cast<double>(nl) / static_cast<double>(n);
            const double pr = static_cast<double>(nr) / static_cast<double>(n);
            const double d1 = std::abs(static_cast<double>(left1) / static_cast<double>(nl) -
                                       static_cast<double>(right1) / static_cast<double>(nr));
            const double d2 = std::abs(static_cast<double>(left2) / static_cast<double>(nl) -
                                       static_cast<double>(right2) / static_cast<double>(nr));
            return pl * pr / 4.0 * (d1 + d2) * (d1 + d2);
        }
        case SplitCriterion::Deviance:
            return node_impurity(criterion, left1 + right1, left2 + right2) -
                   node_impurity(criterion, left1, left2) -
                   node_impurity(criterion, right1, right2);
    }
    return 0.0;
}

double CartModel::leaf_value(const CartNode& leaf) const {
    const double n = static_cast<double>(leaf.count_omega1 + leaf.count_omega2);
    // Classification: Omega2 fraction. Regression: mean of unit-encoded
    // labels, which is the same number for 0/1 targets.
    return n > 0.0 ? static_cast<double>(leaf.count_omega2) / n : 0.5;
}

Prediction CartModel::predict(std::span<const double> projected) const {
    std::size_t at = 0;
    while (!nodes[at].is_leaf()) {
        const auto& node = nodes[at];
        at = static_cast<std::size_t>(
            projected[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
    }
    const double soft = leaf_value(nodes[at]);
    return {soft, hard_from_soft(soft)};
}

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double improvement = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const std::vector<Sample>& rows, const std::vector<ClassLabel>& labels,
                const CartParams& params)
        : rows_(rows), labels_(labels), params_(params) {}

    std::vector<CartNode> build() {
        std::vector<std::size_t> all(rows_.size());
        std::iota(all.begin(), all.end(), 0);
        grow(all);
        return std::move(nodes_);
    }

private:
    static constexpr double kMinImprovement = 1e-12;

    int grow(const std::vector<std::size_t>& idx) {
        CartNode node;
        for (std::size_t i : idx) {
            (labels_[i] == ClassLabel::Omega2 ? node.count_omega2 : node.count_omega1) += 1;
        }
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(node);

        const bool pure = node.count_omega1 == 0 || node.count_omega2 == 0;
        if (pure || idx.size() < static_cast<std::size_t>(params_.min_split)) return id;

        const SplitChoice best = best_split(idx, node.count_omega1, node.count_omega2);
        if (best.feature < 0 || !(best.improvement > kMinImprovement)) return id;

        std::vector<std::size_t> left, right;
        const auto f = static_cast<std::size_t>(best.feature);
        for (std::size_t i : idx) (rows_[i][f] <= best.threshold ? left : right).push_back(i);

        const int l = grow(left);
        const int r = grow(right);
        nodes_[static_cast<std::size_t>(id)].feature = best.feature;
        nodes_[static_cast<std::size_t>(id)].threshold = best.threshold;
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    SplitChoice best_split(const std::vector<std::size_t>& idx, std::size_t n1, std::size_t n2) const {
        SplitChoice best;
        const std::size_t d = rows_.front().size();
        std::vector<std::pair<double, ClassLabel>> column(idx.size());
        for (std::size_t f = 0; f < d; ++f) {
            for (std::size_t j = 0; j < idx.size(); ++j) column[j] = {rows_[idx[j]][f], labels_[idx[j]]};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::size_t l1 = 0, l2 = 0;
            for (std::size_t j = 0; j + 1 < column.size(); ++j) {
                (column[j].second == ClassLabel::Omega2 ? l2 : l1) += 1;
                if (column[j].first == column[j + 1].first) continue;
                const double gain = split_improvement(params_.criterion, l1, l2, n1 - l1, n2 - l2);
                // strict comparison keeps the lowest feature, then smallest threshold
                if (gain > best.improvement) {
                    best.feature = static_cast<int>(f);
                    best.threshold = column[j].first + (column[j + 1].first - column[j].first) / 2.0;
                    best.improvement = gain;
                }
            }
        }
        return best;
    }

    const std::vector<Sample>& rows_;
    const std::vector<ClassLabel>& labels_;
    const CartParams& params_;
    std::vector<CartNode> nodes_;
};

}  // namespace

TrainedClassifier train_cart(const Dataset& train, std::span<const std::size_t> feature_indices,
                             const CartParams& params) {
    check_features(train, feature_indices);
    if (params.min_split < 2) throw ContractError("min_split must be at least 2");
    std::vector<Sample> rows;
    rows.reserve(train.size());
    for (const auto& row : train.samples()) rows.push_back(project(row, feature_indices));

    CartModel model;
    model.params = params;
    model.nodes = TreeBuilder(rows, train.labels(), params).build();
    return TrainedClassifier(std::move(model),
                             std::vector<std::size_t>(feature_indices.begin(), feature_indices.end()),
                             train.dimension());
}

TrainedClassifier train_classifier(const Dataset& train,
                                   std::span<const std::size_t> feature_indices,
                                   const ClassifierParams& params) {
    return std::visit(Overloaded{
                          [&](const WknnParams& p) { return train_wknn(train, feature_indices, p); },
                          [&](const CartParams& p) { return train_cart(train, feature_indices, p); },
                      },
                      params);
}

// ---------------------------------------------------------------------------

TrainedClassifier::TrainedClassifier(Model model, std::vector<std::size_t> feature_indices,
                                     std::size_t input_dimension)
    : model_(std::move(model)), features_(std::move(feature_indices)), input_dimension_(input_dimension) {}

ClassifierKind TrainedClassifier::kind() const noexcept {
    return std::holds_alternative<WknnModel>(model_) ? ClassifierKind::Wknn : ClassifierKind::Cart;
}

Prediction TrainedClassifier::predict(std::span<const double> sample) const {
    if (sample.size() != input_dimension_) {
        throw ContractError("sample dimension " + std::to_string(sample.size()) +
                            " does not match training dimension " + std::to_string(input_dimension_));
    }
    const auto projected = project(sample, features_);
    return std::visit([&](const auto& m) { return m.predict(projected); }, model_);
}

Prediction predict_wknn(const TrainedClassifier& model, std::span<const double> sample) {
    if (model.kind() != ClassifierKind::Wknn) throw ContractError("not a w/k-NN model");
    return model.predict(sample);
}

Prediction predict_cart(const TrainedClassifier& model, std::span<const double> sample) {
    if (model.kind() != ClassifierKind::Cart) throw ContractError("not a CART model");
    return model.predict(sample);
}

ClassifierOutputs ensemble_outputs(std::span<const TrainedClassifier> models, const Dataset& data) {
    ClassifierOutputs out(data.size(), models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        for (std::size_t s = 0; s < data.size(); ++s) out.set(s, i, models[i].predict(data.sample(s)).soft);
    }
    return out;
}

}  // namespace wmr
