#pragma once
// Model archives: one self-describing JSON document per trained ensemble
// (members, feature groups, local accuracy estimators, priors, LSE weights),
// tagged with kArchiveFormat. Layout in docs/formats.md.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmr/classifiers.hpp"
#include "wmr/combiners.hpp"
#include "wmr/evaluation.hpp"
#include "wmr/lae.hpp"

namespace wmr {

inline constexpr const char* kArchiveFormat = "wmr-archive/1";

nlohmann::json to_json(const TrainedClassifier& model);
TrainedClassifier classifier_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LaeEstimator& est);
/// Rebuilds from the retained records and checks the stored summary matches.
LaeEstimator lae_from_json(const nlohmann::json& j);

struct EnsembleArchive {
    std::string plan;
    std::string dataset;
    int k = 0;
    std::size_t realization = 0;
    SubspacePartition partition;
    std::vector<TrainedClassifier> members;
    ValidationFit fit;
};

nlohmann::json to_json(const EnsembleArchive& archive);
EnsembleArchive archive_from_json(const nlohmann::json& j);

EnsembleArchive make_archive(const ExperimentPlan& plan, const RealizationResult& result);
void save_archive(const EnsembleArchive& archive, const std::filesystem::path& path);
EnsembleArchive load_archive(const std::filesystem::path& path);

}  // namespace wmr
