#include "wmr/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace wmr {

namespace {

struct RuleNames {
    RuleKind kind;
    const char* id;
    const char* display;
};

constexpr RuleNames kRuleNames[] = {
    {RuleKind::WmrStatic, "wmr_static", "WMR: logodds (static)"},
    {RuleKind::WmrAdaptive, "wmr_adaptive", "WMR: logodds (adaptive)"},
    {RuleKind::SimpleMajority, "simple_majority", "STD: simple majority"},
    {RuleKind::Maximum, "maximum", "STD: maximum"},
    {RuleKind::SimpleAverage, "simple_average", "STD: simple average"},
    {RuleKind::LseWeightedAverage, "lse_weighted_average", "STD: LSE-w/average"},
    {RuleKind::DcsLaNoPriors, "dcs_la_no_priors", "STD: DCS-LA (no priors)"},
    {RuleKind::DcsLaWithPriors, "dcs_la_with_priors", "STD: DCS-LA (w/priors)"},
};

void check_scores(std::span<const double> soft) {
    if (soft.empty()) throw ContractError("combination needs at least one member");
    for (double s : soft) {
        if (!(s >= 0.0 && s <= 1.0)) throw ContractError("soft output outside [0,1]");
    }
}

}  // namespace

const char* to_string(RuleKind kind) noexcept {
    for (const auto& r : kRuleNames) {
        if (r.kind == kind) return r.id;
    }
    return "?";
}

const char* display_name(RuleKind kind) noexcept {
    for (const auto& r : kRuleNames) {
        if (r.kind == kind) return r.display;
    }
    return "?";
}

RuleKind rule_kind_from_string(const std::string& text) {
    for (const auto& r : kRuleNames) {
        if (text == r.id) return r.kind;
    }
    throw ContractError("unknown combination rule '" + text + "'");
}

double logodds(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ContractError("log-odds needs p in (0,1), got " + std::to_string(p));
    return std::log(p / (1.0 - p));
}

ClassLabel threshold_decide(double score, double lo, double hi) {
    if (!(lo <= hi)) throw ContractError("threshold range with lo > hi");
    return score > (lo + hi) / 2.0 ? ClassLabel::Omega2 : ClassLabel::Omega1;
}

// ---------------------------------------------------------------------------
// Weighted majority

FusionResult weighted_vote(std::span<const double> weights, std::span<const ClassLabel> votes) {
    if (votes.empty() || weights.size() != votes.size()) {
        throw ContractError("weighted vote needs one weight per vote");
    }
    // Mass behind each class after turning negative weights into inverted votes.
    double mass1 = 0.0, mass2 = 0.0;
    for (std::size_t i = 0; i < votes.size(); ++i) {
        const double w = weights[i];
        if (!std::isfinite(w)) throw ContractError("non-finite voting weight");
        const ClassLabel v = w < 0.0 ? flip(votes[i]) : votes[i];
        (v == ClassLabel::Omega2 ? mass2 : mass1) += std::abs(w);
    }
    FusionResult out;
    const double total = mass1 + mass2;
    if (total == 0.0 || mass1 == mass2) {
        out.score = 0.5;
        out.decision = ClassLabel::Omega1;
        return out;
    }
    out.score = mass2 / total;
    out.decision = mass2 > mass1 ? ClassLabel::Omega2 : ClassLabel::Omega1;
    // keep score and decision consistent when rounding lands on 1/2
    if (out.decision == ClassLabel::Omega2 && !(out.score > 0.5)) out.score = std::nextafter(0.5, 1.0);
    if (out.decision == ClassLabel::Omega1 && out.score > 0.5) out.score = 0.5;
    return out;
}

FittedRule fit_wmr_static(std::span<const PriorCompetence> priors) {
    if (priors.empty()) throw ContractError("static WMR needs at least one member");
    std::vector<double> w(priors.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
        w[i] = logodds(priors[i].p);
        norm += std::abs(w[i]);
    }
    if (norm > 0.0) {
        for (double& x : w) x /= norm;
    }
    FittedRule rule;
    rule.kind = RuleKind::WmrStatic;
    rule.static_weights = std::move(w);
    rule.priors = std::vector<PriorCompetence>(priors.begin(), priors.end());
    return rule;
}

FittedRule fit_wmr_adaptive(std::vector<LaeEstimator> lae_handles) {
    if (lae_handles.empty()) throw ContractError("adaptive WMR needs at least one member");
    FittedRule rule;
    rule.kind = RuleKind::WmrAdaptive;
    rule.lae_handles = std::move(lae_handles);
    return rule;
}

std::vector<double> fit_wmr_adaptive_weights(std::span<const LaeEstimator> lae_handles,
                                             std::span<const double> soft_scores) {
    if (lae_handles.size() != soft_scores.size()) {
        throw ContractError("one soft score per local accuracy estimator required");
    }
    std::vector<double> w(soft_scores.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = logodds(local_accuracy(lae_handles[i], soft_scores[i]));
    return w;
}

FusionResult combine_wmr(const FittedRule& rule, std::span<const ClassLabel> votes,
                         std::optional<std::span<const double>> per_sample_weights) {
    if (rule.kind == RuleKind::WmrAdaptive) {
        if (!per_sample_weights) throw ContractError("adaptive WMR needs per-sample weights");
        auto out = weighted_vote(*per_sample_weights, votes);
        out.per_member_weights = std::vector<double>(per_sample_weights->begin(), per_sample_weights->end());
        return out;
    }
    if (per_sample_weights) throw ContractError("per-sample weights given to a static rule");
    if (rule.kind == RuleKind::SimpleMajority) return combine_simple_majority(votes);
    if (!rule.static_weights) throw ContractError("rule has no static weights");
    return weighted_vote(*rule.static_weights, votes);
}

FusionResult combine_simple_majority(std::span<const ClassLabel> votes) {
    if (votes.empty()) throw ContractError("majority of an empty committee");
    const std::vector<double> w(votes.size(), 1.0 / static_cast<double>(votes.size()));
    return weighted_vote(w, votes);
}

// ---------------------------------------------------------------------------
// Soft-output rules

FusionResult combine_maximum(std::span<const double> soft) {
    check_scores(soft);
    double support2 = 0.0, support1 = 0.0;
    for (double s : soft) {
        support2 = std::max(support2, s);
        support1 = std::max(support1, 1.0 - s);
    }
    FusionResult out;
    out.decision = support2 > support1 ? ClassLabel::Omega2 : ClassLabel::Omega1;
    out.score = out.decision == ClassLabel::Omega2 ? support2 : support1;
    return out;
}

FusionResult combine_simple_average(std::span<const double> soft) {
    check_scores(soft);
    FusionResult out;
    out.score = std::accumulate(soft.begin(), soft.end(), 0.0) / static_cast<double>(soft.size());
    out.decision = threshold_decide(out.score, 0.0, 1.0);
    return out;
}

FittedRule fit_lse_weights(const ClassifierOutputs& validation,
                           std::span<const ClassLabel> validation_labels) {
    const auto n = static_cast<Eigen::Index>(validation.n_samples());
    const auto k = static_cast<Eigen::Index>(validation.n_members());
    if (validation_labels.size() != validation.n_samples()) {
        throw ContractError("LSE fit: label count does not match outputs");
    }
    if (n < k) {
        throw DataError("LSE fit needs at least K=" + std::to_string(k) + " validation samples, got " +
                        std::to_string(n));
    }
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        for (Eigen::Index i = 0; i < k; ++i) {
            x(s, i) = validation.soft(static_cast<std::size_t>(s), static_cast<std::size_t>(i));
        }
        y(s) = label_to_unit(validation_labels[static_cast<std::size_t>(s)]);
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    double lambda = 1e-8 * gram.trace() / static_cast<double>(k);
    if (!(lambda > 0.0)) lambda = 1e-12;
    gram.diagonal().array() += lambda;
    const Eigen::VectorXd w = gram.ldlt().solve(x.transpose() * y);

    FittedRule rule;
    rule.kind = RuleKind::LseWeightedAverage;
    std::vector<double> weights(static_cast<std::size_t>(k));
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        weights[static_cast<std::size_t>(i)] = w(i);
        lo += std::min(w(i), 0.0);
        hi += std::max(w(i), 0.0);
    }
    rule.lse_weights = std::move(weights);
    rule.threshold = (lo + hi) / 2.0;
    return rule;
}

FusionResult combine_lse(const FittedRule& rule, std::span<const double> soft) {
    check_scores(soft);
    if (!rule.lse_weights || rule.lse_weights->size() != soft.size()) {
        throw ContractError("LSE rule weights do not match the ensemble size");
    }
    const auto& w = *rule.lse_weights;
    double lo = 0.0, hi = 0.0, score = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        score += w[i] * soft[i];
        lo += std::min(w[i], 0.0);
        hi += std::max(w[i], 0.0);
    }
    FusionResult out;
    out.score = score;
    out.decision = threshold_decide(score, lo, hi);
    return out;
}

FusionResult combine_dcs_la(std::span<const LaeEstimator> lae_handles,
                            std::optional<std::span<const PriorCompetence>> priors,
                            std::span<const double> soft, std::span<const ClassLabel> hard) {
    check_scores(soft);
    if (lae_handles.size() != soft.size() || hard.size() != soft.size()) {
        throw ContractError("DCS-LA inputs differ in ensemble size");
    }
    if (priors && priors->size() != soft.size()) throw ContractError("DCS-LA priors differ in ensemble size");

    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i < soft.size(); ++i) {
        double p = local_accuracy(lae_handles[i], soft[i]);
        if (priors) p *= (*priors)[i].p;
        if (p > best_p) {
            best_p = p;
            best = i;
        }
    }
    FusionResult out;
    out.score = soft[best];
    out.decision = hard[best];
    out.selected_member = best;
    out.selected_confidence = best_p;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<bool>> member_correct_flags(const ClassifierOutputs& outputs,
                                                    std::span<const ClassLabel> truth) {
    if (truth.size() != outputs.n_samples()) throw ContractError("truth does not match outputs");
    std::vector<std::vector<bool>> flags(outputs.n_members(), std::vector<bool>(outputs.n_samples()));
    for (std::size_t s = 0; s < outputs.n_samples(); ++s) {
        for (std::size_t i = 0; i < outputs.n_members(); ++i) flags[i][s] = outputs.hard(s, i) == truth[s];
    }
    return flags;
}

ValidationFit fit_validation(const ClassifierOutputs& validation,
                             std::span<const ClassLabel> validation_labels, std::size_t lae_bins) {
    const auto flags = member_correct_flags(validation, validation_labels);
    ValidationFit fit;
    for (std::size_t i = 0; i < validation.n_members(); ++i) {
        fit.lae.push_back(fit_lae(validation.soft_column(i), flags[i], lae_bins));
        fit.priors.push_back(prior_competence(flags[i]));
    }
    fit.lse = fit_lse_weights(validation, validation_labels);
    return fit;
}

FittedRule make_rule(RuleKind kind, const ValidationFit& fit) {
    FittedRule rule;
    rule.kind = kind;
    switch (kind) {
        case RuleKind::WmrStatic:
            return fit_wmr_static(fit.priors);
        case RuleKind::WmrAdaptive:
            return fit_wmr_adaptive(fit.lae);
        case RuleKind::LseWeightedAverage:
            return fit.lse;
        case RuleKind::DcsLaNoPriors:
            rule.lae_handles = fit.lae;
            return rule;
        case RuleKind::DcsLaWithPriors:
            rule.lae_handles = fit.lae;
            rule.priors = fit.priors;
            return rule;
        case RuleKind::SimpleMajority:
        case RuleKind::Maximum:
        case RuleKind::SimpleAverage:
            return rule;
    }
    return rule;
}

FusionResult fuse(const FittedRule& rule, std::span<const double> soft, std::span<const ClassLabel> hard) {
    switch (rule.kind) {
        case RuleKind::WmrStatic:
            return combine_wmr(rule, hard);
        case RuleKind::WmrAdaptive: {
            const auto w = fit_wmr_adaptive_weights(*rule.lae_handles, soft);
            return combine_wmr(rule, hard, std::span<const double>(w));
        }
        case RuleKind::SimpleMajority:
            return combine_simple_majority(hard);
        case RuleKind::Maximum:
            return combine_maximum(soft);
        case RuleKind::SimpleAverage:
            return combine_simple_average(soft);
        case RuleKind::LseWeightedAverage:
            return combine_lse(rule, soft);
        case RuleKind::DcsLaNoPriors:
            return combine_dcs_la(*rule.lae_handles, std::nullopt, soft, hard);
        case RuleKind::DcsLaWithPriors:
            return combine_dcs_la(*rule.lae_handles, std::span<const PriorCompetence>(*rule.priors), soft, hard);
    }
    throw ContractError("unknown rule kind");
}

}  // namespace wmr
