#include "wmr/core_types.hpp"

#include <algorithm>
#include <cmath>

namespace wmr {

ClassLabel hard_from_soft(double soft_score) {
    if (!(soft_score >= 0.0 && soft_score <= 1.0)) {
        throw ContractError("soft score outside [0,1]: " + std::to_string(soft_score));
    }
    return soft_score > 0.5 ? ClassLabel::Omega2 : ClassLabel::Omega1;
}

const char* to_string(ClassLabel label) noexcept {
    return label == ClassLabel::Omega2 ? "omega2" : "omega1";
}

const char* to_string(ClassifierKind kind) noexcept {
    return kind == ClassifierKind::Wknn ? "wknn" : "cart";
}

ClassifierKind classifier_kind_from_string(const std::string& text) {
    if (text == "wknn") return ClassifierKind::Wknn;
    if (text == "cart") return ClassifierKind::Cart;
    throw ContractError("unknown classifier kind '" + text + "'");
}

Dataset::Dataset(std::string name, std::vector<Sample> samples, std::vector<ClassLabel> labels,
                 std::vector<std::string> feature_names)
    : name_(std::move(name)),
      samples_(std::move(samples)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
    if (samples_.empty()) throw ContractError("dataset '" + name_ + "' has no samples");
    if (samples_.size() != labels_.size()) {
        throw ContractError("dataset '" + name_ + "': sample/label count mismatch");
    }
    dimension_ = samples_.front().size();
    if (dimension_ == 0) throw ContractError("dataset '" + name_ + "': zero-dimensional samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& row = samples_[i];
        if (row.size() != dimension_) {
            throw ContractError("dataset '" + name_ + "': row " + std::to_string(i) +
                                " has dimension " + std::to_string(row.size()));
        }
        if (!std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); })) {
            throw ContractError("dataset '" + name_ + "': row " + std::to_string(i) +
                                " has a non-finite feature");
        }
    }
    if (!feature_names_.empty() && feature_names_.size() != dimension_) {
        throw ContractError("dataset '" + name_ + "': feature name count mismatch");
    }
}

std::size_t Dataset::count(ClassLabel label) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> indices, std::string name) const {
    std::vector<Sample> rows;
    std::vector<ClassLabel> labels;
    rows.reserve(indices.size());
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
        rows.push_back(samples_.at(i));
        labels.push_back(labels_.at(i));
    }
    return Dataset(name.empty() ? name_ : std::move(name), std::move(rows), std::move(labels),
                   feature_names_);
}

ClassifierOutputs::ClassifierOutputs(std::size_t n_samples, std::size_t n_members)
    : n_samples_(n_samples),
      n_members_(n_members),
      soft_(n_samples * n_members, 0.0),
      hard_(n_samples * n_members, ClassLabel::Omega1) {
    if (n_members == 0) throw ContractError("ensemble needs at least one member");
}

std::vector<double> ClassifierOutputs::soft_column(std::size_t member) const {
    std::vector<double> column(n_samples_);
    for (std::size_t s = 0; s < n_samples_; ++s) column[s] = soft(s, member);
    return column;
}

void ClassifierOutputs::set(std::size_t sample, std::size_t member, double soft_score) {
    const std::size_t at = sample * n_members_ + member;
    hard_[at] = hard_from_soft(soft_score);
    soft_[at] = soft_score;
}

}  // namespace wmr
