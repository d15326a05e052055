#pragma once
// The eight combination rules compared by the library, all on the [0,1]
// vote/score scale with Omega2 <-> 1:
//
//   WMR static       log-odds of global validation competence
//   WMR adaptive     log-odds of per-sample local accuracy
//   simple majority  WMR with equal weights 1/K
//   maximum          class of the largest support over all members
//   simple average   mean soft output
//   LSE average      least-squares weights on soft outputs, half-range threshold
//   DCS-LA           most locally accurate member decides (with/without priors)
//
// Ties at the threshold always resolve to Omega1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmr/core_types.hpp"
#include "wmr/lae.hpp"

namespace wmr {

enum class RuleKind : std::uint8_t {
    WmrStatic,
    WmrAdaptive,
    SimpleMajority,
    Maximum,
    SimpleAverage,
    LseWeightedAverage,
    DcsLaNoPriors,
    DcsLaWithPriors,
};

inline constexpr RuleKind kAllRules[] = {
    RuleKind::WmrStatic,     RuleKind::WmrAdaptive,        RuleKind::SimpleMajority,
    RuleKind::Maximum,       RuleKind::SimpleAverage,      RuleKind::LseWeightedAverage,
    RuleKind::DcsLaNoPriors, RuleKind::DcsLaWithPriors,
};

/// Machine name, e.g. "wmr_adaptive".
const char* to_string(RuleKind kind) noexcept;
/// Human-readable label, e.g. "WMR: logodds (adaptive)".
const char* display_name(RuleKind kind) noexcept;
RuleKind rule_kind_from_string(const std::string& text);

struct FittedRule {
    RuleKind kind = RuleKind::SimpleMajority;
    /// WMR static: log-odds weights scaled so that sum |w_i| = 1.
    std::optional<std::vector<double>> static_weights;
    /// LSE: raw least-squares weights.
    std::optional<std::vector<double>> lse_weights;
    std::optional<std::vector<LaeEstimator>> lae_handles;
    std::optional<std::vector<PriorCompetence>> priors;
    double threshold = 0.5;
};

struct FusionResult {
    double score = 0.0;
    ClassLabel decision = ClassLabel::Omega1;
    std::optional<std::size_t> selected_member;          // DCS-LA
    std::optional<double> selected_confidence;           // DCS-LA
    std::optional<std::vector<double>> per_member_weights;  // adaptive WMR, raw log-odds
};

/// ln(p / (1 - p)); p must lie strictly inside (0,1).
double logodds(double p);

/// Omega2 iff score > (lo + hi) / 2.
ClassLabel threshold_decide(double score, double lo, double hi);

FittedRule fit_wmr_static(std::span<const PriorCompetence> priors);
FittedRule fit_wmr_adaptive(std::vector<LaeEstimator> lae_handles);

/// Per-sample log-odds weights from each member's local accuracy at its own score.
std::vector<double> fit_wmr_adaptive_weights(std::span<const LaeEstimator> lae_handles,
                                             std::span<const double> soft_scores);

/// Weighted vote with per-decision normalization: negative-weight members vote
/// inverted with weight |w|, weights are scaled to sum to one and T = 1/2.
/// per_sample_weights is required exactly for adaptive rules; for other kinds
/// the rule's static weights are used.
FusionResult combine_wmr(const FittedRule& rule, std::span<const ClassLabel> votes,
                         std::optional<std::span<const double>> per_sample_weights = std::nullopt);

/// Weighted vote for explicit raw weights (used by every WMR flavour).
FusionResult weighted_vote(std::span<const double> weights, std::span<const ClassLabel> votes);

FusionResult combine_simple_majority(std::span<const ClassLabel> votes);
FusionResult combine_maximum(std::span<const double> soft);
FusionResult combine_simple_average(std::span<const double> soft);

/// Ridge-stabilized least squares of labels on soft outputs (no intercept).
FittedRule fit_lse_weights(const ClassifierOutputs& validation,
                           std::span<const ClassLabel> validation_labels);
FusionResult combine_lse(const FittedRule& rule, std::span<const double> soft);

/// priors present selects the full-Bayes variant.
FusionResult combine_dcs_la(std::span<const LaeEstimator> lae_handles,
                            std::optional<std::span<const PriorCompetence>> priors,
                            std::span<const double> soft, std::span<const ClassLabel> hard);

/// Per-member correctness of hard votes against the truth.
std::vector<std::vector<bool>> member_correct_flags(const ClassifierOutputs& outputs,
                                                    std::span<const ClassLabel> truth);

/// Everything the rules learn from validation outputs: one LAE and one prior
/// competence per member, and the LSE weights.
struct ValidationFit {
    std::vector<LaeEstimator> lae;
    std::vector<PriorCompetence> priors;
    FittedRule lse;
};

ValidationFit fit_validation(const ClassifierOutputs& validation,
                             std::span<const ClassLabel> validation_labels,
                             std::size_t lae_bins = kAutoBins);

FittedRule make_rule(RuleKind kind, const ValidationFit& fit);

/// Applies any fitted rule to one sample's member outputs.
FusionResult fuse(const FittedRule& rule, std::span<const double> soft,
                  std::span<const ClassLabel> hard);

}  // namespace wmr
