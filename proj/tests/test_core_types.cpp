#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "wmr/core_types.hpp"

using namespace wmr;

TEST_CASE("hard_from_soft thresholds strictly above one half") {
    CHECK(hard_from_soft(1.0) == ClassLabel::Omega2);
    CHECK(hard_from_soft(0.5) == ClassLabel::Omega1);
    CHECK(hard_from_soft(0.4999) == ClassLabel::Omega1);
    CHECK(hard_from_soft(std::nextafter(0.5, 1.0)) == ClassLabel::Omega2);
    CHECK(hard_from_soft(0.0) == ClassLabel::Omega1);
    CHECK_THROWS_AS(hard_from_soft(-0.01), ContractError);
    CHECK_THROWS_AS(hard_from_soft(1.01), ContractError);
    CHECK_THROWS_AS(hard_from_soft(std::numeric_limits<double>::quiet_NaN()), ContractError);
}

TEST_CASE("unit encoding round-trips") {
    CHECK(label_to_unit(ClassLabel::Omega1) == 0.0);
    CHECK(label_to_unit(ClassLabel::Omega2) == 1.0);
    for (auto l : {ClassLabel::Omega1, ClassLabel::Omega2}) {
        CHECK(unit_to_label(label_to_unit(l)) == l);
        CHECK(flip(flip(l)) == l);
        CHECK(flip(l) != l);
    }
}

TEST_CASE("Dataset validates shape and finiteness") {
    const std::vector<Sample> rows{{1.0, 2.0}, {3.0, 4.0}};
    const std::vector<ClassLabel> labels{ClassLabel::Omega1, ClassLabel::Omega2};
    Dataset d("toy", rows, labels);
    CHECK(d.size() == 2);
    CHECK(d.dimension() == 2);
    CHECK(d.has_both_classes());
    CHECK(d.count(ClassLabel::Omega2) == 1);

    CHECK_THROWS_AS(Dataset("bad", {{1.0, 2.0}, {3.0}}, labels), ContractError);
    CHECK_THROWS_AS(Dataset("bad", rows, {ClassLabel::Omega1}), ContractError);
    CHECK_THROWS_AS(Dataset("bad", {{1.0, NAN}, {3.0, 4.0}}, labels), ContractError);
    CHECK_THROWS_AS(Dataset("bad", {{1.0, INFINITY}, {3.0, 4.0}}, labels), ContractError);
    CHECK_THROWS_AS(Dataset("bad", {}, {}), ContractError);
}

TEST_CASE("subset keeps order and never drops rows") {
    std::vector<Sample> rows;
    std::vector<ClassLabel> labels;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({static_cast<double>(i)});
        labels.push_back(i % 2 ? ClassLabel::Omega2 : ClassLabel::Omega1);
    }
    Dataset d("seq", rows, labels);
    const std::vector<std::size_t> a{7, 2, 5}, b{0, 1, 3, 4, 6, 8, 9};
    const auto da = d.subset(a), db = d.subset(b);
    CHECK(da.sample(0)[0] == 7.0);
    CHECK(da.label(0) == ClassLabel::Omega2);
    CHECK(da.size() + db.size() == d.size());
    std::vector<double> seen;
    for (const auto& s : da.samples()) seen.push_back(s[0]);
    for (const auto& s : db.samples()) seen.push_back(s[0]);
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < 10; ++i) CHECK(seen[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("ClassifierOutputs derives hard votes from soft outputs") {
    ClassifierOutputs out(3, 2);
    const double soft[3][2] = {{0.5, 0.51}, {0.0, 1.0}, {0.2, 0.8}};
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t i = 0; i < 2; ++i) out.set(s, i, soft[s][i]);
    }
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(out.soft(s, i) == soft[s][i]);
            CHECK(out.hard(s, i) == hard_from_soft(out.soft(s, i)));
        }
        CHECK(out.soft_row(s).size() == 2);
    }
    CHECK(out.soft_column(1) == std::vector<double>{0.51, 1.0, 0.8});
    CHECK_THROWS_AS(out.set(0, 0, 1.5), ContractError);
}

TEST_CASE("classifier kind names") {
    CHECK(classifier_kind_from_string(to_string(ClassifierKind::Wknn)) == ClassifierKind::Wknn);
    CHECK(classifier_kind_from_string(to_string(ClassifierKind::Cart)) == ClassifierKind::Cart);
    CHECK_THROWS_AS(classifier_kind_from_string("svm"), ContractError);
}
