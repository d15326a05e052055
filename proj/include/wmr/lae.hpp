#pragma once
// Local accuracy estimation. For one classifier, the validation records
// (soft score, correct?) are binned by equal frequency over the score range,
// each bin's error rate is computed, and a shape-preserving cubic through
// (bin median, error rate) turns that into a continuous P(error | score).
// The local accuracy is one minus the clamped error curve.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wmr/pchip.hpp"

namespace wmr {

/// Pass as n_bins to let fit_lae pick the bin count from the record count.
inline constexpr std::size_t kAutoBins = 0;

class LaeEstimator {
public:
    const std::vector<double>& bin_edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& bin_counts() const noexcept { return counts_; }
    const std::vector<std::size_t>& bin_error_counts() const noexcept { return errors_; }
    const std::vector<double>& bin_centers() const noexcept { return spline_.knots(); }
    const std::vector<double>& bin_error_rates() const noexcept { return spline_.values(); }
    const MonotoneCubic& spline() const noexcept { return spline_; }
    double clamp_eps() const noexcept { return clamp_eps_; }
    std::size_t n_bins() const noexcept { return counts_.size(); }
    /// The bin count originally asked for (kAutoBins for automatic).
    std::size_t requested_bins() const noexcept { return requested_bins_; }

    const std::vector<double>& record_scores() const noexcept { return scores_; }
    const std::vector<bool>& record_flags() const noexcept { return flags_; }
    std::pair<double, double> score_range() const noexcept { return {edges_.front(), edges_.back()}; }

    /// Unclamped interpolated error rate.
    double error_probability(double soft_score) const { return spline_(soft_score); }

    friend bool operator==(const LaeEstimator&, const LaeEstimator&);

private:
    friend LaeEstimator fit_lae(std::span<const double>, const std::vector<bool>&, std::size_t);

    std::vector<double> edges_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> errors_;
    MonotoneCubic spline_;
    double clamp_eps_ = 0.0;
    std::size_t requested_bins_ = kAutoBins;
    std::vector<double> scores_;
    std::vector<bool> flags_;
};

/// Bin count actually used for n records: AUTO is max(5, floor(sqrt(n)))
/// capped at n/5; every bin must hold at least two records.
std::size_t effective_bin_count(std::size_t n_records, std::size_t requested);

LaeEstimator fit_lae(std::span<const double> soft_scores, const std::vector<bool>& correct_flags,
                     std::size_t n_bins = kAutoBins);

/// 1 - clamp(H(score), eps, 1 - eps).
double local_accuracy(const LaeEstimator& est, double soft_score);

/// Refit over the retained records plus the new ones.
LaeEstimator update_lae(const LaeEstimator& est, std::span<const double> new_scores,
                        const std::vector<bool>& new_flags);

/// Overall validation success rate of a classifier.
struct PriorCompetence {
    double p = 0.5;
};

/// Mean of the flags, clamped to [1/(2n), 1 - 1/(2n)].
PriorCompetence prior_competence(const std::vector<bool>& correct_flags);

}  // namespace wmr
