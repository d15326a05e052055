#include "wmr/lae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wmr/core_types.hpp"

namespace wmr {

std::size_t effective_bin_count(std::size_t n_records, std::size_t requested) {
    std::size_t m = requested;
    if (m == kAutoBins) {
        m = std::max<std::size_t>(5, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_records)))));
        m = std::min(m, n_records / 5);
    }
    m = std::min(m, n_records / 2);
    return std::max<std::size_t>(m, 1);
}

LaeEstimator fit_lae(std::span<const double> soft_scores, const std::vector<bool>& correct_flags,
                     std::size_t n_bins) {
    const std::size_t n = soft_scores.size();
    if (n == 0) throw ContractError("local accuracy estimator needs at least one record");
    if (correct_flags.size() != n) throw ContractError("scores and flags differ in length");
    if (!std::all_of(soft_scores.begin(), soft_scores.end(), [](double v) { return std::isfinite(v); })) {
        throw ContractError("non-finite score in local accuracy records");
    }

    LaeEstimator est;
    est.scores_.assign(soft_scores.begin(), soft_scores.end());
    est.flags_ = correct_flags;
    est.requested_bins_ = n_bins;
    est.clamp_eps_ = 1.0 / (2.0 * static_cast<double>(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return soft_scores[a] < soft_scores[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = soft_scores[order[i]];
    const double lo = sorted.front(), hi = sorted.back();

    // Quantile cuts; tied scores never straddle an edge, so duplicates merge bins.
    const std::size_t m = effective_bin_count(n, n_bins);
    est.edges_.push_back(lo);
    for (std::size_t b = 1; b < m; ++b) {
        const double cut = sorted[b * n / m];
        if (cut > est.edges_.back() && cut < hi) est.edges_.push_back(cut);
    }
    est.edges_.push_back(hi > lo ? hi : std::nextafter(lo, HUGE_VAL));

    const std::size_t bins = est.edges_.size() - 1;
    est.counts_.assign(bins, 0);
    est.errors_.assign(bins, 0);
    std::vector<std::vector<double>> members(bins);
    std::size_t bin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (bin + 1 < bins && sorted[i] >= est.edges_[bin + 1]) ++bin;
        est.counts_[bin] += 1;
        if (!correct_flags[order[i]]) est.errors_[bin] += 1;
        members[bin].push_back(sorted[i]);
    }

    std::vector<double> centers(bins), rates(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const auto& v = members[b];
        const std::size_t c = v.size();
        centers[b] = c % 2 == 1 ? v[c / 2] : (v[c / 2 - 1] + v[c / 2]) / 2.0;
        rates[b] = static_cast<double>(est.errors_[b]) / static_cast<double>(c);
    }
    est.spline_ = MonotoneCubic(std::move(centers), std::move(rates));
    return est;
}

double local_accuracy(const LaeEstimator& est, double soft_score) {
    if (!std::isfinite(soft_score)) throw ContractError("non-finite score");
    const double eps = est.clamp_eps();
    return 1.0 - std::clamp(est.error_probability(soft_score), eps, 1.0 - eps);
}

LaeEstimator update_lae(const LaeEstimator& est, std::span<const double> new_scores,
                        const std::vector<bool>& new_flags) {
    if (new_scores.size() != new_flags.size()) throw ContractError("scores and flags differ in length");
    std::vector<double> scores = est.record_scores();
    std::vector<bool> flags = est.record_flags();
    scores.insert(scores.end(), new_scores.begin(), new_scores.end());
    flags.insert(flags.end(), new_flags.begin(), new_flags.end());
    return fit_lae(scores, flags, est.requested_bins());
}

bool operator==(const LaeEstimator& a, const LaeEstimator& b) {
    return a.edges_ == b.edges_ && a.counts_ == b.counts_ && a.errors_ == b.errors_ &&
           a.spline_.knots() == b.spline_.knots() && a.spline_.values() == b.spline_.values() &&
           a.spline_.slopes() == b.spline_.slopes() && a.clamp_eps_ == b.clamp_eps_ &&
           a.requested_bins_ == b.requested_bins_ && a.scores_ == b.scores_ && a.flags_ == b.flags_;
}

PriorCompetence prior_competence(const std::vector<bool>& correct_flags) {
    if (correct_flags.empty()) throw ContractError("prior competence of an empty record set");
    const auto n = static_cast<double>(correct_flags.size());
    const auto hits = static_cast<double>(std::count(correct_flags.begin(), correct_flags.end(), true));
    const double eps = 1.0 / (2.0 * n);
    return {std::clamp(hits / n, eps, 1.0 - eps)};
}

}  // namespace wmr
