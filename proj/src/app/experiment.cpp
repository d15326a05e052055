#include "wmr/app/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <ostream>

#include "wmr/lae.hpp"

namespace wmr {

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

RankingTable run_config(const ConfigFile& config, std::size_t jobs, bool quiet, std::ostream& log) {
    const auto archive_dir = config.output_dir / "archives";
    std::filesystem::create_directories(archive_dir);

    std::mutex log_mutex;
    std::vector<CellRecord> records;
    for (const auto& pc : config.plans) {
        const auto& plan = pc.plan;
        Dataset data = [&] {
            try {
                return load_source(pc.source, plan);
            } catch (const std::exception& e) {
                throw DataError("plan '" + plan.name + "': dataset '" + plan.dataset_name + "': " + e.what());
            }
        }();

        for (int k : plan.k_splits) {
            CellOptions opts;
            opts.jobs = jobs;
            opts.on_realization = [&, k](const RealizationResult& r) {
                const auto path = archive_dir / (plan.name + "_k" + std::to_string(k) + "_r" + std::to_string(r.index) + ".json");
                save_archive(make_archive(plan, r), path);
                if (!quiet) {
                    std::lock_guard lock(log_mutex);
                    log << plan.name << ": K=" << k << " realization " << r.index + 1 << "/" << plan.n_realizations
                        << " done\n";
                }
            };
            auto cells = run_cell(data, plan, k, opts);
            for (auto& c : cells) records.push_back({plan.name, std::move(c), std::nullopt});
        }
    }
    return write_reports(records, config.output_dir);
}

int run_experiment(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
                   std::ostream& err) {
    ConfigFile config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    if (options.seed) override_seed(config, *options.seed);
    if (options.out) config.output_dir = *options.out;
    const std::size_t jobs = std::max<std::size_t>(1, options.jobs.value_or(config.jobs));

    try {
        const auto table = run_config(config, jobs, options.quiet, err);
        out << format_summary(table);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitPlanFailure;
    }
    return kExitOk;
}

void emit_lae_curve(const EnsembleArchive& archive, std::size_t member_index, std::size_t n_points,
                    std::ostream& out) {
    if (member_index >= archive.fit.lae.size()) {
        throw ContractError("member index " + std::to_string(member_index) + " out of range (archive has " +
                            std::to_string(archive.fit.lae.size()) + " members)");
    }
    if (n_points == 0) throw ContractError("n_points must be positive");
    const auto& est = archive.fit.lae[member_index];
    const auto& scores = est.record_scores();
    const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    const double lo = *lo_it, hi = *hi_it;

    out << "# score local_accuracy\n";
    for (std::size_t i = 0; i < n_points; ++i) {
        double s = lo;
        if (n_points > 1) {
            s = i + 1 == n_points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        }
        out << shortest(s) << ' ' << shortest(local_accuracy(est, s)) << '\n';
    }
}

}  // namespace wmr
