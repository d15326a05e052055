// wmr: benchmark driver for weighted-majority decision fusion.
//
//   wmr gen twonorm -n 7400 -o twonorm.csv
//   wmr ingest-check splice.csv --label-column class --positive-label EI
//   wmr run configs/desk.json --jobs 8
//   wmr rank out/cells.jsonl other/cells.jsonl --out ranked
//   wmr lae-curve out/archives/twonorm-wknn_k5_r0.json --member 2 --points 101

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmr/app/csv_io.hpp"
#include "wmr/app/experiment.hpp"
#include "wmr/app/generators.hpp"

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> jobs;
    bool quiet = false;
};

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const wmr::ContractError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wmr::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wmr::kExitPlanFailure;
    }
}

// Writes to `path`, or stdout when it is empty or "-".
template <class F>
void with_output(const std::string& path, F&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw wmr::DataError("cannot write '" + path + "'");
    body(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted-majority decision fusion benchmarks"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "RNG seed (overrides the config's top-level seed)");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--jobs", g.jobs, "parallel workers")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", g.quiet, "suppress progress messages");

    auto* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV");
    std::string gen_name, gen_file;
    std::size_t gen_n = 0;
    gen->add_option("name", gen_name, "twonorm | ringnorm | waveform")->required();
    gen->add_option("-n,--size", gen_n, "number of samples")->required()->check(CLI::Range(std::size_t{2}, SIZE_MAX));
    gen->add_option("-o,--output", gen_file, "CSV file (default: stdout)");

    auto* check = app.add_subcommand("ingest-check", "parse a CSV dataset and describe it");
    std::string check_file, check_label, check_positive;
    check->add_option("csv", check_file)->required();
    check->add_option("--label-column", check_label, "header name or 0-based index")->required();
    check->add_option("--positive-label", check_positive, "label value mapped to class 2")->required();

    auto* run = app.add_subcommand("run", "run every plan of a config file");
    std::string run_config;
    run->add_option("config", run_config)->required();

    auto* rank = app.add_subcommand("rank", "re-rank cell records from one or more cells.jsonl files");
    std::vector<std::string> rank_files;
    rank->add_option("cells", rank_files)->required();

    auto* curve = app.add_subcommand("lae-curve", "sample a member's local accuracy curve from an archive");
    std::string curve_archive, curve_file;
    std::size_t curve_member = 0, curve_points = 101;
    curve->add_option("archive", curve_archive)->required();
    curve->add_option("--member", curve_member, "0-based member index");
    curve->add_option("--points", curve_points, "number of samples")->check(CLI::PositiveNumber);
    curve->add_option("-o,--output", curve_file, "data file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : wmr::kExitConfigError;
    }

    if (*gen) {
        return guarded([&] {
            const auto kind = wmr::generator_kind_from_string(gen_name);
            const auto data = wmr::generate_dataset(kind, gen_n, g.seed.value_or(0));
            with_output(gen_file, [&](std::ostream& os) { wmr::export_csv(data, os); });
            return wmr::kExitOk;
        });
    }
    if (*check) {
        return guarded([&] {
            const auto data = wmr::ingest_csv(check_file, check_label, check_positive);
            std::cout << "dataset      " << data.name() << '\n'
                      << "samples      " << data.size() << '\n'
                      << "dimension    " << data.dimension() << '\n'
                      << "class 1      " << data.count(wmr::ClassLabel::Omega1) << '\n'
                      << "class 2      " << data.count(wmr::ClassLabel::Omega2) << " (" << check_positive << ")\n"
                      << "bhattacharyya " << wmr::bhattacharyya_distance(data) << '\n';
            return wmr::kExitOk;
        });
    }
    if (*run) {
        wmr::RunOptions opts;
        opts.seed = g.seed;
        if (g.out) opts.out = *g.out;
        opts.jobs = g.jobs;
        opts.quiet = g.quiet;
        return wmr::run_experiment(run_config, opts, std::cout, std::cerr);
    }
    if (*rank) {
        return guarded([&] {
            std::vector<wmr::CellRecord> records;
            for (const auto& f : rank_files) {
                auto part = wmr::read_cells_jsonl(f);
                records.insert(records.end(), part.begin(), part.end());
            }
            if (g.out) {
                std::cout << wmr::format_summary(wmr::write_reports(records, *g.out));
            } else {
                std::vector<wmr::CellResult> cells;
                for (const auto& r : records) cells.push_back(r.cell);
                std::cout << wmr::format_summary(wmr::wborda_rank(std::move(cells)));
            }
            return wmr::kExitOk;
        });
    }
    return guarded([&] {
        const auto archive = wmr::load_archive(curve_archive);
        with_output(curve_file, [&](std::ostream& os) { wmr::emit_lae_curve(archive, curve_member, curve_points, os); });
        return wmr::kExitOk;
    });
}
