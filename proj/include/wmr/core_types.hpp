#pragma once
// Shared vocabulary for the decision-fusion library: binary labels, samples,
// datasets and the per-member output matrix every combination rule consumes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmr {

/// Raised when a caller violates a documented precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the data cannot support the requested computation
/// (too few samples, a missing class, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ClassLabel : std::uint8_t { Omega1 = 0, Omega2 = 1 };

/// Canonical vote extraction: Omega2 iff the score is strictly above 1/2.
ClassLabel hard_from_soft(double soft_score);

/// Omega1 -> 0, Omega2 -> 1.
constexpr double label_to_unit(ClassLabel label) noexcept {
    return label == ClassLabel::Omega2 ? 1.0 : 0.0;
}

/// Inverse of label_to_unit; any value above 1/2 maps to Omega2.
constexpr ClassLabel unit_to_label(double unit) noexcept {
    return unit > 0.5 ? ClassLabel::Omega2 : ClassLabel::Omega1;
}

constexpr ClassLabel flip(ClassLabel label) noexcept {
    return label == ClassLabel::Omega2 ? ClassLabel::Omega1 : ClassLabel::Omega2;
}

const char* to_string(ClassLabel label) noexcept;

using Sample = std::vector<double>;

/// Labeled feature matrix, row-major. Immutable once constructed.
class Dataset {
public:
    Dataset() = default;

    /// Validates shape and finiteness; throws ContractError on violation.
    Dataset(std::string name, std::vector<Sample> samples, std::vector<ClassLabel> labels,
            std::vector<std::string> feature_names = {});

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    bool empty() const noexcept { return samples_.empty(); }

    const Sample& sample(std::size_t i) const { return samples_.at(i); }
    ClassLabel label(std::size_t i) const { return labels_.at(i); }
    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const std::vector<ClassLabel>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

    std::size_t count(ClassLabel label) const noexcept;
    bool has_both_classes() const noexcept {
        return count(ClassLabel::Omega1) > 0 && count(ClassLabel::Omega2) > 0;
    }

    /// Rows at the given indices, in that order.
    Dataset subset(std::span<const std::size_t> indices, std::string name = {}) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::string name_;
    std::vector<Sample> samples_;
    std::vector<ClassLabel> labels_;
    std::vector<std::string> feature_names_;
    std::size_t dimension_ = 0;
};

/// Soft and hard outputs of a K-member ensemble over n samples.
/// soft(s, i) is member i's support for Omega2 on sample s; hard is derived
/// from soft with hard_from_soft and is never stored independently.
class ClassifierOutputs {
public:
    ClassifierOutputs() = default;
    ClassifierOutputs(std::size_t n_samples, std::size_t n_members);

    std::size_t n_samples() const noexcept { return n_samples_; }
    std::size_t n_members() const noexcept { return n_members_; }

    double soft(std::size_t sample, std::size_t member) const {
        return soft_[sample * n_members_ + member];
    }
    ClassLabel hard(std::size_t sample, std::size_t member) const {
        return hard_[sample * n_members_ + member];
    }
    std::span<const double> soft_row(std::size_t sample) const {
        return {soft_.data() + sample * n_members_, n_members_};
    }
    std::span<const ClassLabel> hard_row(std::size_t sample) const {
        return {hard_.data() + sample * n_members_, n_members_};
    }
    std::vector<double> soft_column(std::size_t member) const;

    /// Sets soft(s, i) and the matching hard vote; score must be in [0,1].
    void set(std::size_t sample, std::size_t member, double soft_score);

private:
    std::size_t n_samples_ = 0;
    std::size_t n_members_ = 0;
    std::vector<double> soft_;
    std::vector<ClassLabel> hard_;
};

enum class ClassifierKind : std::uint8_t { Wknn, Cart };

const char* to_string(ClassifierKind kind) noexcept;
ClassifierKind classifier_kind_from_string(const std::string& text);

}  // namespace wmr
