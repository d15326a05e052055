#include "wmr/app/archive.hpp"

#include <fstream>

namespace wmr {

using nlohmann::json;

namespace {

std::vector<int> labels_to_ints(const std::vector<ClassLabel>& labels) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == ClassLabel::Omega2 ? 1 : 0;
    return out;
}

std::vector<ClassLabel> ints_to_labels(const std::vector<int>& v) {
    std::vector<ClassLabel> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] != 0 ? ClassLabel::Omega2 : ClassLabel::Omega1;
    return out;
}

}  // namespace

json to_json(const TrainedClassifier& model) {
    json j;
    j["kind"] = to_string(model.kind());
    j["feature_indices"] = model.feature_indices();
    j["input_dimension"] = model.input_dimension();
    if (const auto* w = std::get_if<WknnModel>(&model.model())) {
        j["params"] = {{"k", w->params.k},
                       {"distance", to_string(w->params.distance)},
                       {"minkowski_p", w->params.minkowski_p},
                       {"weighting", to_string(w->params.weighting)}};
        j["points"] = w->points;
        j["labels"] = labels_to_ints(w->labels);
        j["inverse_covariance"] = w->distance.inverse_covariance();
    } else {
        const auto& c = std::get<CartModel>(model.model());
        j["params"] = {{"criterion", to_string(c.params.criterion)},
                       {"min_split", c.params.min_split},
                       {"mode", to_string(c.params.mode)}};
        json nodes = json::array();
        for (const auto& n : c.nodes) {
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"n1", n.count_omega1},
                             {"n2", n.count_omega2}});
        }
        j["nodes"] = std::move(nodes);
    }
    return j;
}

TrainedClassifier classifier_from_json(const json& j) {
    const auto kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    auto features = j.at("feature_indices").get<std::vector<std::size_t>>();
    const auto dim = j.at("input_dimension").get<std::size_t>();
    const auto& p = j.at("params");
    if (kind == ClassifierKind::Wknn) {
        WknnModel m;
        m.params.k = p.at("k").get<int>();
        m.params.distance = distance_metric_from_string(p.at("distance").get<std::string>());
        m.params.minkowski_p = p.at("minkowski_p").get<double>();
        m.params.weighting = weighting_from_string(p.at("weighting").get<std::string>());
        m.points = j.at("points").get<std::vector<Sample>>();
        m.labels = ints_to_labels(j.at("labels").get<std::vector<int>>());
        m.distance = DistanceFunction(m.params.distance, m.params.minkowski_p,
                                      j.at("inverse_covariance").get<std::vector<double>>());
        if (m.points.size() != m.labels.size() || m.points.size() < static_cast<std::size_t>(m.params.k)) {
            throw DataError("archive: inconsistent k-NN model");
        }
        return TrainedClassifier(std::move(m), std::move(features), dim);
    }
    CartModel m;
    m.params.criterion = split_criterion_from_string(p.at("criterion").get<std::string>());
    m.params.min_split = p.at("min_split").get<int>();
    m.params.mode = tree_mode_from_string(p.at("mode").get<std::string>());
    for (const auto& n : j.at("nodes")) {
        CartNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.count_omega1 = n.at("n1").get<std::size_t>();
        node.count_omega2 = n.at("n2").get<std::size_t>();
        m.nodes.push_back(node);
    }
    if (m.nodes.empty()) throw DataError("archive: tree without nodes");
    return TrainedClassifier(std::move(m), std::move(features), dim);
}

json to_json(const LaeEstimator& est) {
    std::vector<int> flags(est.record_flags().size());
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = est.record_flags()[i] ? 1 : 0;
    return {{"bin_edges", est.bin_edges()},
            {"bin_counts", est.bin_counts()},
            {"bin_error_counts", est.bin_error_counts()},
            {"knots", est.bin_centers()},
            {"knot_error_rates", est.bin_error_rates()},
            {"knot_slopes", est.spline().slopes()},
            {"clamp_eps", est.clamp_eps()},
            {"requested_bins", est.requested_bins()},
            {"record_scores", est.record_scores()},
            {"record_correct", flags}};
}

LaeEstimator lae_from_json(const json& j) {
    const auto scores = j.at("record_scores").get<std::vector<double>>();
    const auto ints = j.at("record_correct").get<std::vector<int>>();
    std::vector<bool> flags(ints.size());
    for (std::size_t i = 0; i < ints.size(); ++i) flags[i] = ints[i] != 0;
    auto est = fit_lae(scores, flags, j.at("requested_bins").get<std::size_t>());
    if (est.bin_edges() != j.at("bin_edges").get<std::vector<double>>() ||
        est.bin_counts() != j.at("bin_counts").get<std::vector<std::size_t>>() ||
        est.bin_error_counts() != j.at("bin_error_counts").get<std::vector<std::size_t>>() ||
        est.bin_centers() != j.at("knots").get<std::vector<double>>()) {
        throw DataError("archive: local accuracy summary does not match its records");
    }
    return est;
}

json to_json(const EnsembleArchive& a) {
    json members = json::array();
    for (const auto& m : a.members) members.push_back(to_json(m));
    json lae = json::array();
    for (const auto& e : a.fit.lae) lae.push_back(to_json(e));
    std::vector<double> priors;
    for (const auto& p : a.fit.priors) priors.push_back(p.p);
    return {{"format", kArchiveFormat},
            {"plan", a.plan},
            {"dataset", a.dataset},
            {"k", a.k},
            {"realization", a.realization},
            {"partition", {{"groups", a.partition.groups}, {"group_scores", a.partition.group_scores}}},
            {"members", std::move(members)},
            {"lae", std::move(lae)},
            {"priors", priors},
            {"lse", {{"weights", a.fit.lse.lse_weights.value_or(std::vector<double>{})},
                     {"threshold", a.fit.lse.threshold}}}};
}

EnsembleArchive archive_from_json(const json& j) {
    if (!j.contains("format") || j.at("format") != kArchiveFormat) {
        throw DataError("not a model archive (expected format tag " + std::string(kArchiveFormat) + ")");
    }
    EnsembleArchive a;
    a.plan = j.at("plan").get<std::string>();
    a.dataset = j.at("dataset").get<std::string>();
    a.k = j.at("k").get<int>();
    a.realization = j.at("realization").get<std::size_t>();
    a.partition.groups = j.at("partition").at("groups").get<std::vector<std::vector<std::size_t>>>();
    a.partition.group_scores = j.at("partition").at("group_scores").get<std::vector<double>>();
    for (const auto& m : j.at("members")) a.members.push_back(classifier_from_json(m));
    for (const auto& e : j.at("lae")) a.fit.lae.push_back(lae_from_json(e));
    for (double p : j.at("priors").get<std::vector<double>>()) a.fit.priors.push_back({p});
    a.fit.lse.kind = RuleKind::LseWeightedAverage;
    a.fit.lse.lse_weights = j.at("lse").at("weights").get<std::vector<double>>();
    a.fit.lse.threshold = j.at("lse").at("threshold").get<double>();
    if (a.fit.lae.size() != a.members.size() || a.fit.priors.size() != a.members.size()) {
        throw DataError("archive: member count mismatch");
    }
    return a;
}

EnsembleArchive make_archive(const ExperimentPlan& plan, const RealizationResult& result) {
    return {plan.name, plan.dataset_name, result.k, result.index, result.partition, result.members, result.fit};
}

void save_archive(const EnsembleArchive& archive, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write archive '" + path.string() + "'");
    out << to_json(archive).dump() << '\n';
}

EnsembleArchive load_archive(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open archive '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("archive '" + path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        return archive_from_json(j);
    } catch (const json::exception& e) {
        throw DataError("archive '" + path.string() + "' is malformed: " + e.what());
    }
}

}  // namespace wmr
