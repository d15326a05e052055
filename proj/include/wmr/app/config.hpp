#pragma once
// Experiment configuration files (JSON). Schema in docs/config.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wmr/app/generators.hpp"
#include "wmr/evaluation.hpp"

namespace wmr {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratorSource {
    GeneratorKind kind = GeneratorKind::Twonorm;
    std::size_t n = 0;  // 0: train_size + test_size
    std::optional<std::uint64_t> seed;
};

struct CsvSource {
    std::filesystem::path path;  // resolved against the config file's directory
    std::string label_column;
    std::string positive_label;
};

using DatasetSource = std::variant<GeneratorSource, CsvSource>;

struct PlanConfig {
    ExperimentPlan plan;
    DatasetSource source;
    bool explicit_seed = false;
};

struct ConfigFile {
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    std::size_t jobs = 1;
    std::vector<PlanConfig> plans;
};

/// Parses and validates every plan; throws ConfigError on any problem,
/// including unknown keys.
ConfigFile parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ConfigFile load_config(const std::filesystem::path& path);

/// Replaces the file-level seed; plans without their own seed follow it.
void override_seed(ConfigFile& config, std::uint64_t seed);

Dataset load_source(const DatasetSource& source, const ExperimentPlan& plan);

}  // namespace wmr
