#pragma once
// End-to-end experiment runs driven by a config file, plus the LAE curve
// export used for plotting.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "wmr/app/archive.hpp"
#include "wmr/app/config.hpp"
#include "wmr/app/report.hpp"

namespace wmr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPlanFailure = 1;
inline constexpr int kExitConfigError = 2;

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> jobs;
    bool quiet = false;
};

/// Runs every plan of an already-validated config. Writes reports and
/// archives under the output directory; throws DataError naming the failing
/// plan, dataset, K and realization.
RankingTable run_config(const ConfigFile& config, std::size_t jobs, bool quiet, std::ostream& log);

/// Loads, validates, runs and reports. The summary goes to `out`,
/// diagnostics and progress to `err`. Returns one of the kExit* codes.
int run_experiment(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
                   std::ostream& err);

/// n_points rows "score local_accuracy", evenly spaced over the member's
/// recorded score range.
void emit_lae_curve(const EnsembleArchive& archive, std::size_t member_index, std::size_t n_points,
                    std::ostream& out);

}  // namespace wmr
