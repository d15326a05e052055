#include "wmr/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wmr/app/csv_io.hpp"

namespace wmr {

namespace {

using nlohmann::json;

void allow_only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get_required(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key '" + std::string(key) + "' has the wrong type");
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return get_required<T>(obj, key, where);
}

std::size_t get_count(const json& obj, const char* key, const std::string& where) {
    const auto v = get_required<std::int64_t>(obj, key, where);
    if (v < 0) throw ConfigError(where + ": '" + std::string(key) + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

ClassifierParams parse_classifier(const json& obj, const std::string& where) {
    const auto kind = get_required<std::string>(obj, "kind", where);
    if (kind == "wknn") {
        allow_only(obj, where, {"kind", "k", "distance", "weighting", "minkowski_p"});
        WknnParams p;
        p.k = get_or<int>(obj, "k", p.k, where);
        p.distance = distance_metric_from_string(get_or<std::string>(obj, "distance", "euclidean", where));
        p.weighting = weighting_from_string(get_or<std::string>(obj, "weighting", "constant", where));
        p.minkowski_p = get_or<double>(obj, "minkowski_p", p.minkowski_p, where);
        return p;
    }
    if (kind == "cart") {
        allow_only(obj, where, {"kind", "criterion", "min_split", "mode"});
        CartParams p;
        p.criterion = split_criterion_from_string(get_or<std::string>(obj, "criterion", "gini", where));
        p.min_split = get_or<int>(obj, "min_split", p.min_split, where);
        p.mode = tree_mode_from_string(get_or<std::string>(obj, "mode", "classification", where));
        return p;
    }
    throw ConfigError(where + ": unknown classifier kind '" + kind + "'");
}

DatasetSource parse_source(const json& obj, const std::filesystem::path& base_dir, const std::string& where) {
    if (obj.contains("generator")) {
        allow_only(obj, where, {"generator", "n", "seed"});
        GeneratorSource g;
        g.kind = generator_kind_from_string(get_required<std::string>(obj, "generator", where));
        if (obj.contains("n")) g.n = get_count(obj, "n", where);
        if (obj.contains("seed")) g.seed = get_required<std::uint64_t>(obj, "seed", where);
        return g;
    }
    if (obj.contains("csv")) {
        allow_only(obj, where, {"csv", "label_column", "positive_label"});
        CsvSource c;
        c.path = get_required<std::string>(obj, "csv", where);
        if (c.path.is_relative()) c.path = base_dir / c.path;
        c.label_column = get_required<std::string>(obj, "label_column", where);
        c.positive_label = get_required<std::string>(obj, "positive_label", where);
        return c;
    }
    throw ConfigError(where + ": dataset needs either 'generator' or 'csv'");
}

PlanConfig parse_plan(const json& obj, std::size_t index, std::uint64_t default_seed,
                      const std::filesystem::path& base_dir) {
    std::string where = "plans[" + std::to_string(index) + "]";
    allow_only(obj, where,
               {"name", "dataset", "train_size", "test_size", "validation_fraction", "k_splits", "classifier",
                "rules", "realizations", "seed", "lae_bins"});
    PlanConfig pc;
    auto& plan = pc.plan;
    plan.name = get_required<std::string>(obj, "name", where);
    where += " ('" + plan.name + "')";

    pc.source = parse_source(get_required<json>(obj, "dataset", where), base_dir, where + ".dataset");
    plan.dataset_name = std::visit(
        [](const auto& s) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, GeneratorSource>) {
                return to_string(s.kind);
            } else {
                return s.path.stem().string();
            }
        },
        pc.source);

    plan.train_size = get_count(obj, "train_size", where);
    plan.test_size = get_count(obj, "test_size", where);
    plan.validation_fraction = get_or<double>(obj, "validation_fraction", plan.validation_fraction, where);
    plan.k_splits = get_or<std::vector<int>>(obj, "k_splits", plan.k_splits, where);
    plan.classifier = parse_classifier(get_required<json>(obj, "classifier", where), where + ".classifier");
    if (obj.contains("rules")) {
        plan.rules.clear();
        for (const auto& r : get_required<std::vector<std::string>>(obj, "rules", where)) {
            plan.rules.push_back(rule_kind_from_string(r));
        }
    }
    plan.n_realizations = obj.contains("realizations") ? get_count(obj, "realizations", where) : plan.n_realizations;
    pc.explicit_seed = obj.contains("seed");
    plan.rng_seed = pc.explicit_seed ? get_required<std::uint64_t>(obj, "seed", where) : default_seed;
    if (obj.contains("lae_bins")) {
        const auto& bins = obj.at("lae_bins");
        if (bins.is_string() && bins.get<std::string>() == "auto") {
            plan.lae_bins = kAutoBins;
        } else {
            plan.lae_bins = get_count(obj, "lae_bins", where);
            if (plan.lae_bins == 0) throw ConfigError(where + ": lae_bins must be positive or \"auto\"");
        }
    }

    if (auto* g = std::get_if<GeneratorSource>(&pc.source)) {
        if (g->n == 0) g->n = plan.train_size + plan.test_size;
        if (g->n < plan.train_size + plan.test_size) {
            throw ConfigError(where + ": generator size smaller than train_size + test_size");
        }
        const std::size_t dim = generator_dimension(g->kind);
        for (int k : plan.k_splits) {
            if (k > 0 && static_cast<std::size_t>(k) > dim) {
                throw ConfigError(where + ": K=" + std::to_string(k) + " exceeds dataset dimension");
            }
        }
    }
    validate_plan(plan);
    return pc;
}

}  // namespace

ConfigFile parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    allow_only(root, "config", {"seed", "output_dir", "jobs", "plans"});
    ConfigFile cfg;
    try {
        cfg.seed = get_or<std::uint64_t>(root, "seed", 0, "config");
        cfg.output_dir = get_or<std::string>(root, "output_dir", "out", "config");
        cfg.jobs = root.contains("jobs") ? get_count(root, "jobs", "config") : 1;
        const auto plans = get_required<json>(root, "plans", "config");
        if (!plans.is_array() || plans.empty()) throw ConfigError("config: 'plans' must be a non-empty array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < plans.size(); ++i) {
            cfg.plans.push_back(parse_plan(plans[i], i, cfg.seed, base_dir));
            if (!names.insert(cfg.plans.back().plan.name).second) {
                throw ConfigError("config: duplicate plan name '" + cfg.plans.back().plan.name + "'");
            }
        }
    } catch (const ContractError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

void override_seed(ConfigFile& config, std::uint64_t seed) {
    config.seed = seed;
    for (auto& pc : config.plans) {
        if (!pc.explicit_seed) pc.plan.rng_seed = seed;
    }
}

Dataset load_source(const DatasetSource& source, const ExperimentPlan& plan) {
    if (const auto* g = std::get_if<GeneratorSource>(&source)) {
        const std::size_t n = g->n == 0 ? plan.train_size + plan.test_size : g->n;
        return generate_dataset(g->kind, n, g->seed.value_or(plan.rng_seed));
    }
    const auto& c = std::get<CsvSource>(source);
    return ingest_csv(c.path, c.label_column, c.positive_label);
}

}  // namespace wmr
