#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wmr/app/generators.hpp"
#include "wmr/classifiers.hpp"
#include "wmr/evaluation.hpp"

using namespace wmr;
using wmr::testing::gaussian_blobs;
using wmr::testing::iota_indices;

namespace {

Dataset one_d(std::vector<double> xs, std::vector<ClassLabel> ys) {
    std::vector<Sample> rows;
    for (double x : xs) rows.push_back({x});
    return Dataset("1d", std::move(rows), std::move(ys));
}

constexpr auto W1 = ClassLabel::Omega1;
constexpr auto W2 = ClassLabel::Omega2;

// Independent criterion oracles.
double gini(double n1, double n2) {
    const double n = n1 + n2;
    if (n == 0) return 0.0;
    return 1.0 - (n1 / n) * (n1 / n) - (n2 / n) * (n2 / n);
}

double deviance(double n1, double n2) {
    const double n = n1 + n2;
    double d = 0.0;
    for (double c : {n1, n2}) {
        if (c > 0) d -= 2.0 * c * std::log(c / n);
    }
    return d;
}

double oracle_gain(SplitCriterion c, double l1, double l2, double r1, double r2) {
    const double nl = l1 + l2, nr = r1 + r2, n = nl + nr;
    switch (c) {
        case SplitCriterion::Gini: return gini(l1 + r1, l2 + r2) - nl / n * gini(l1, l2) - nr / n * gini(r1, r2);
        case SplitCriterion::Twoing: {
            const double s = std::abs(l1 / nl - r1 / nr) + std::abs(l2 / nl - r2 / nr);
            return (nl / n) * (nr / n) / 4.0 * s * s;
        }
        case SplitCriterion::Deviance: return deviance(l1 + r1, l2 + r2) - deviance(l1, l2) - deviance(r1, r2);
    }
    return 0.0;
}

double training_accuracy(const TrainedClassifier& m, const Dataset& d) {
    std::size_t ok = 0;
    for (std::size_t s = 0; s < d.size(); ++s) ok += m.predict(d.sample(s)).hard == d.label(s) ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("k=1 returns the label of an identical training point") {
    const auto d = gaussian_blobs(40, 3, 1.0, 11);
    const auto m = train_wknn(d, iota_indices(3), {1, DistanceMetric::Euclidean, 3.0, Weighting::Constant});
    for (std::size_t s = 0; s < d.size(); ++s) {
        const auto p = m.predict(d.sample(s));
        CHECK(p.hard == d.label(s));
        CHECK((p.soft == 0.0 || p.soft == 1.0));
    }
}

TEST_CASE("equidistant pair with k=2 ties to Omega1") {
    const auto d = one_d({-1.0, 1.0}, {W1, W2});
    const auto m = train_wknn(d, iota_indices(1), {2, DistanceMetric::Euclidean, 3.0, Weighting::Constant});
    const auto p = m.predict(Sample{0.0});
    CHECK(p.soft == doctest::Approx(0.5));
    CHECK(p.hard == W1);
}

TEST_CASE("linear profile weights and the worked example") {
    const std::vector<double> dist{0.0, 1.0, 2.0};
    const auto w = neighbor_weights(Weighting::Linear, dist);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(2.0 / 3.0));
    CHECK(w[2] == doctest::Approx(1.0 / 3.0));

    const auto d = one_d({0.0, 1.0, 2.0}, {W2, W1, W1});
    const auto m = train_wknn(d, iota_indices(1), {3, DistanceMetric::Euclidean, 3.0, Weighting::Linear});
    const auto p = m.predict(Sample{0.0});
    CHECK(p.soft == doctest::Approx(0.5));
    CHECK(p.hard == W1);
}

TEST_CASE("gaussian profile scales to the k-th distance") {
    const auto w = neighbor_weights(Weighting::Gaussian, std::vector<double>{0.0, 1.0, 2.0});
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(std::exp(-1.0)));
    CHECK(w[2] == doctest::Approx(std::exp(-4.0)));
    const auto flat = neighbor_weights(Weighting::Gaussian, std::vector<double>{0.0, 0.0});
    CHECK(flat == std::vector<double>{1.0, 1.0});
}

TEST_CASE("unanimous neighbourhood gives full support under every profile") {
    const auto d = one_d({0.0, 0.1, 0.2, 5.0, 6.0}, {W2, W2, W2, W1, W1});
    for (auto w : {Weighting::Constant, Weighting::Linear, Weighting::Gaussian}) {
        const auto m = train_wknn(d, iota_indices(1), {3, DistanceMetric::Euclidean, 3.0, w});
        CHECK(m.predict(Sample{0.05}).soft == 1.0);
    }
}

TEST_CASE("constant weighting equals the plain vote fraction") {
    const auto train = gaussian_blobs(60, 4, 0.3, 5);
    const auto test = gaussian_blobs(40, 4, 0.3, 6);
    const int k = 7;
    const auto m = train_wknn(train, iota_indices(4), {k, DistanceMetric::Euclidean, 3.0, Weighting::Constant});
    for (std::size_t s = 0; s < test.size(); ++s) {
        std::vector<std::pair<double, int>> dist;
        for (std::size_t t = 0; t < train.size(); ++t) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 4; ++j) acc += std::pow(train.sample(t)[j] - test.sample(s)[j], 2);
            dist.emplace_back(std::sqrt(acc), train.label(t) == W2 ? 1 : 0);
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        int votes = 0;
        for (int i = 0; i < k; ++i) votes += dist[static_cast<std::size_t>(i)].second;
        CHECK(m.predict(test.sample(s)).soft == doctest::Approx(votes / static_cast<double>(k)));
    }
}

TEST_CASE("k-NN contract errors") {
    const auto d = gaussian_blobs(10, 2, 1.0, 1);
    CHECK_THROWS_AS(train_wknn(d, iota_indices(2), {11, DistanceMetric::Euclidean, 3.0, Weighting::Constant}),
                    ContractError);
    CHECK_THROWS_AS(train_wknn(d, {}, {1, DistanceMetric::Euclidean, 3.0, Weighting::Constant}), ContractError);
    const auto m = train_wknn(d, iota_indices(2), {1, DistanceMetric::Euclidean, 3.0, Weighting::Constant});
    CHECK_THROWS_AS(m.predict(Sample{1.0, 2.0, 3.0}), ContractError);
}

TEST_CASE("distance axioms: zero on identical vectors, symmetric") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<Sample> rows(30, Sample(5));
    for (auto& r : rows) {
        for (auto& v : r) v = g(rng);
    }
    const auto inv = regularized_inverse_covariance(rows);
    for (auto metric : {DistanceMetric::Euclidean, DistanceMetric::Cityblock, DistanceMetric::Minkowski,
                        DistanceMetric::Cosine, DistanceMetric::Correlation, DistanceMetric::Mahalanobis,
                        DistanceMetric::Chebychev, DistanceMetric::Hamming}) {
        CAPTURE(to_string(metric));
        const DistanceFunction dist(metric, 3.0, metric == DistanceMetric::Mahalanobis ? inv : std::vector<double>{});
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            CHECK(dist(rows[i], rows[i]) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(dist(rows[i], rows[i + 1]) == doctest::Approx(dist(rows[i + 1], rows[i])).epsilon(1e-12));
            CHECK(dist(rows[i], rows[i + 1]) >= 0.0);
        }
    }
}

TEST_CASE("metric spot values") {
    const Sample a{0.0, 0.0, 0.0}, b{1.0, 2.0, 2.0};
    CHECK(DistanceFunction(DistanceMetric::Euclidean)(a, b) == doctest::Approx(3.0));
    CHECK(DistanceFunction(DistanceMetric::Cityblock)(a, b) == doctest::Approx(5.0));
    CHECK(DistanceFunction(DistanceMetric::Chebychev)(a, b) == doctest::Approx(2.0));
    CHECK(DistanceFunction(DistanceMetric::Minkowski, 3.0)(a, b) == doctest::Approx(std::cbrt(17.0)));
    CHECK(DistanceFunction(DistanceMetric::Hamming)(a, b) == doctest::Approx(1.0));
    CHECK(DistanceFunction(DistanceMetric::Hamming)(Sample{1, 2, 3}, Sample{1, 0, 3}) == doctest::Approx(1.0 / 3.0));
    // degenerate inputs fall back to the maximal distance
    CHECK(DistanceFunction(DistanceMetric::Cosine)(a, b) == 1.0);
    CHECK(DistanceFunction(DistanceMetric::Correlation)(Sample{1, 1, 1}, b) == 1.0);
    CHECK(DistanceFunction(DistanceMetric::Cosine)(Sample{1, 0}, Sample{0, 1}) == doctest::Approx(1.0));
    CHECK(DistanceFunction(DistanceMetric::Cosine)(Sample{1, 0}, Sample{-1, 0}) == doctest::Approx(2.0));
    const std::vector<double> identity{1, 0, 0, 0, 1, 0, 0, 0, 1};
    CHECK(DistanceFunction(DistanceMetric::Mahalanobis, 3.0, identity)(a, b) == doctest::Approx(3.0));
}

TEST_CASE("k=1 constant is perfect on its own training set") {
    const auto d = gaussian_blobs(80, 3, 0.2, 9);
    for (auto metric : {DistanceMetric::Euclidean, DistanceMetric::Cityblock, DistanceMetric::Mahalanobis}) {
        const auto m = train_wknn(d, iota_indices(3), {1, metric, 3.0, Weighting::Constant});
        CHECK(training_accuracy(m, d) == 1.0);
    }
}

TEST_CASE("pure training set gives a single leaf") {
    const auto d = one_d({0.0, 1.0, 2.0, 3.0}, {W2, W2, W2, W2});
    const auto m = train_cart(d, iota_indices(1), {SplitCriterion::Gini, 2, TreeMode::Classification});
    CHECK(std::get<CartModel>(m.model()).nodes.size() == 1);
    const auto p = m.predict(Sample{-100.0});
    CHECK(p.soft == 1.0);
    CHECK(p.hard == W2);
}

TEST_CASE("node impurity values") {
    CHECK(node_impurity(SplitCriterion::Gini, 5, 5) == doctest::Approx(0.5));
    CHECK(node_impurity(SplitCriterion::Gini, 7, 0) == doctest::Approx(0.0));
    CHECK(node_impurity(SplitCriterion::Deviance, 5, 5) == doctest::Approx(deviance(5, 5)));
    CHECK(node_impurity(SplitCriterion::Deviance, 0, 4) == 0.0);
}

TEST_CASE("split improvement matches the criterion definitions") {
    for (auto c : {SplitCriterion::Gini, SplitCriterion::Twoing, SplitCriterion::Deviance}) {
        for (std::size_t l1 = 0; l1 < 6; ++l1) {
            for (std::size_t l2 = 0; l2 < 6; ++l2) {
                for (std::size_t r1 = 0; r1 < 6; ++r1) {
                    for (std::size_t r2 = 0; r2 < 6; ++r2) {
                        if (l1 + l2 == 0 || r1 + r2 == 0) continue;
                        CHECK(split_improvement(c, l1, l2, r1, r2) ==
                              doctest::Approx(oracle_gain(c, double(l1), double(l2), double(r1), double(r2))));
                    }
                }
            }
        }
    }
}

TEST_CASE("1-d separable set: root threshold between the classes") {
    const auto d = one_d({0.0, 1.0, 10.0, 11.0}, {W1, W1, W2, W2});
    const auto m = train_cart(d, iota_indices(1), {SplitCriterion::Gini, 2, TreeMode::Classification});
    const auto& root = std::get<CartModel>(m.model()).nodes.front();
    REQUIRE_FALSE(root.is_leaf());
    CHECK(root.threshold > 1.0);
    CHECK(root.threshold < 10.0);
    CHECK(training_accuracy(m, d) == 1.0);
    const auto p = m.predict(Sample{0.5});
    CHECK(p.soft == 0.0);
    CHECK(p.hard == W1);
    // a sample exactly on the threshold goes left
    CHECK(m.predict(Sample{root.threshold}).hard == W1);
    CHECK(m.predict(Sample{std::nextafter(root.threshold, 100.0)}).hard == W2);
}

TEST_CASE("regression leaves hold the mean unit label") {
    const auto d = one_d({0, 1, 2, 3, 4, 5}, {W1, W2, W2, W1, W2, W2});
    const auto m = train_cart(d, iota_indices(1), {SplitCriterion::Gini, 100, TreeMode::Regression});
    CHECK(m.predict(Sample{2.0}).soft == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("every split is the best candidate at its node") {
    for (auto c : {SplitCriterion::Gini, SplitCriterion::Twoing, SplitCriterion::Deviance}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto d = gaussian_blobs(40, 3, 0.4, 100 + seed);
            const auto m = train_cart(d, iota_indices(3), {c, 4, TreeMode::Classification});
            const auto& nodes = std::get<CartModel>(m.model()).nodes;

            // route training rows to nodes
            std::vector<std::vector<std::size_t>> at(nodes.size());
            for (std::size_t s = 0; s < d.size(); ++s) {
                int n = 0;
                while (true) {
                    at[static_cast<std::size_t>(n)].push_back(s);
                    const auto& node = nodes[static_cast<std::size_t>(n)];
                    if (node.is_leaf()) break;
                    n = d.sample(s)[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
                }
            }
            for (std::size_t n = 0; n < nodes.size(); ++n) {
                const auto& node = nodes[n];
                if (node.is_leaf()) continue;
                auto gain_of = [&](std::size_t f, double t) {
                    double l1 = 0, l2 = 0, r1 = 0, r2 = 0;
                    for (std::size_t s : at[n]) {
                        const bool left = d.sample(s)[f] <= t;
                        const bool two = d.label(s) == W2;
                        (left ? (two ? l2 : l1) : (two ? r2 : r1)) += 1;
                    }
                    if (l1 + l2 == 0 || r1 + r2 == 0) return -1.0;
                    return oracle_gain(c, l1, l2, r1, r2);
                };
                const double chosen = gain_of(static_cast<std::size_t>(node.feature), node.threshold);
                for (std::size_t f = 0; f < 3; ++f) {
                    for (std::size_t s : at[n]) {
                        CHECK(gain_of(f, d.sample(s)[f]) <= chosen + 1e-9);
                    }
                }
            }
        }
    }
}

TEST_CASE("smaller min_split never lowers training accuracy") {
    const auto d = gaussian_blobs(120, 4, 0.3, 77);
    for (auto c : {SplitCriterion::Gini, SplitCriterion::Twoing, SplitCriterion::Deviance}) {
        double prev = 0.0;
        for (int ms : {60, 40, 20, 10, 5, 2}) {
            const auto m = train_cart(d, iota_indices(4), {c, ms, TreeMode::Classification});
            const double acc = training_accuracy(m, d);
            CHECK(acc >= prev);
            prev = acc;
        }
        CHECK(prev == 1.0);
    }
}

TEST_CASE("members project onto their feature subset") {
    const auto d = gaussian_blobs(50, 4, 1.0, 2);
    const std::vector<std::size_t> f{1, 3};
    const auto m = train_wknn(d, f, {3, DistanceMetric::Euclidean, 3.0, Weighting::Constant});
    Sample a = d.sample(0), b = d.sample(0);
    b[0] += 100.0;
    b[2] -= 100.0;
    CHECK(m.predict(a).soft == m.predict(b).soft);
    CHECK(m.feature_indices() == f);
}

TEST_CASE("ensemble_outputs orders columns as the models") {
    const auto d = gaussian_blobs(30, 2, 1.0, 4);
    const auto a = train_wknn(d, iota_indices(2), {3, DistanceMetric::Euclidean, 3.0, Weighting::Constant});
    const auto b = train_cart(d, iota_indices(2), {SplitCriterion::Gini, 10, TreeMode::Classification});
    const std::vector<TrainedClassifier> same{a, a, a};
    const auto out = ensemble_outputs(same, d);
    CHECK(out.n_members() == 3);
    for (std::size_t s = 0; s < d.size(); ++s) {
        CHECK(out.soft(s, 0) == out.soft(s, 1));
        CHECK(out.soft(s, 1) == out.soft(s, 2));
    }
    const std::vector<TrainedClassifier> mixed{b, a};
    const auto out2 = ensemble_outputs(mixed, d);
    for (std::size_t s = 0; s < d.size(); ++s) {
        CHECK(out2.soft(s, 0) == b.predict(d.sample(s)).soft);
        CHECK(out2.soft(s, 1) == a.predict(d.sample(s)).soft);
    }
}

TEST_CASE("weighted k-NN on twonorm is close to the Bayes rate") {
    const auto data = generate_dataset(GeneratorKind::Twonorm, 2400, 17);
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < data.size(); ++i) (i < 400 ? tr : te).push_back(i);
    const auto train = data.subset(tr), test = data.subset(te);
    const auto m = train_wknn(train, iota_indices(20), {17, DistanceMetric::Euclidean, 3.0, Weighting::Linear});
    CHECK(training_accuracy(m, test) >= 0.95);
}
