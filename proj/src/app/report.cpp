#include "wmr/app/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "wmr/combiners.hpp"

namespace wmr {

using nlohmann::json;

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pad(std::string s, std::size_t width, bool right = false) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return right ? fill + s : s + fill;
}

std::string column_title(const ColumnKey& key) {
    return key.dataset + " / " + key.classifier + " / K=" + std::to_string(key.k);
}

using CellId = std::tuple<std::string, std::string, int, RuleKind>;

CellId id_of(const CellResult& c) { return {c.dataset, c.classifier, c.k, c.rule}; }

}  // namespace

json to_json(const CellRecord& r) {
    const auto& c = r.cell;
    json j = {{"plan", r.plan},
              {"dataset", c.dataset},
              {"classifier", c.classifier},
              {"k", c.k},
              {"rule", to_string(c.rule)},
              {"mean_improvement", c.mean_improvement},
              {"ensemble_accuracy", c.ensemble_accuracy},
              {"member_mean_accuracy", c.member_mean_accuracy},
              {"member_mean_accuracy_sd", c.member_mean_accuracy_sd},
              {"member_max_accuracy", c.member_max_accuracy},
              {"member_max_accuracy_sd", c.member_max_accuracy_sd},
              {"realizations", c.realizations}};
    if (r.points) j["points"] = *r.points;
    return j;
}

CellRecord cell_record_from_json(const json& j) {
    CellRecord r;
    r.plan = j.value("plan", std::string{});
    auto& c = r.cell;
    c.dataset = j.at("dataset").get<std::string>();
    c.classifier = j.at("classifier").get<std::string>();
    c.k = j.at("k").get<int>();
    c.rule = rule_kind_from_string(j.at("rule").get<std::string>());
    c.mean_improvement = j.at("mean_improvement").get<double>();
    c.ensemble_accuracy = j.value("ensemble_accuracy", 0.0);
    c.member_mean_accuracy = j.value("member_mean_accuracy", 0.0);
    c.member_mean_accuracy_sd = j.value("member_mean_accuracy_sd", 0.0);
    c.member_max_accuracy = j.value("member_max_accuracy", 0.0);
    c.member_max_accuracy_sd = j.value("member_max_accuracy_sd", 0.0);
    c.realizations = j.value("realizations", std::size_t{0});
    if (j.contains("points")) r.points = j.at("points").get<int>();
    return r;
}

void write_cells_jsonl(const std::vector<CellRecord>& records, std::ostream& out) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
}

std::vector<CellRecord> read_cells_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<CellRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(cell_record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ContractError& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

json ranking_to_json(const RankingTable& table) {
    json columns = json::array();
    for (std::size_t i = 0; i < table.points.size();) {
        const auto& key = table.points[i].column;
        json entries = json::array();
        for (; i < table.points.size() && table.points[i].column == key; ++i) {
            entries.push_back({{"rule", to_string(table.points[i].rule)},
                               {"mean_improvement", table.cells[i].mean_improvement},
                               {"points", table.points[i].points}});
        }
        columns.push_back({{"dataset", key.dataset}, {"classifier", key.classifier}, {"k", key.k}, {"rules", entries}});
    }
    json totals = json::array();
    for (const auto& t : table.totals) {
        totals.push_back({{"rule", to_string(t.rule)},
                          {"name", display_name(t.rule)},
                          {"sum", t.sum},
                          {"mean", t.mean},
                          {"stdev", t.stdev},
                          {"columns", t.columns}});
    }
    return {{"format", kRankingFormat}, {"columns", columns}, {"totals", totals}};
}

std::string format_summary(const RankingTable& table) {
    std::ostringstream out;
    std::size_t name_w = 4;
    for (RuleKind r : kAllRules) name_w = std::max(name_w, std::string(display_name(r)).size());

    for (std::size_t i = 0; i < table.points.size();) {
        const auto& key = table.points[i].column;
        out << column_title(key) << '\n';
        out << "  " << pad("rule", name_w) << "  " << pad("improvement", 11, true) << "  "
            << pad("ensemble", 8, true) << "  " << pad("points", 6, true) << '\n';
        for (; i < table.points.size() && table.points[i].column == key; ++i) {
            const auto& c = table.cells[i];
            out << "  " << pad(display_name(c.rule), name_w) << "  " << pad(fixed2(c.mean_improvement), 11, true)
                << "  " << pad(fixed2(c.ensemble_accuracy), 8, true) << "  "
                << pad(std::to_string(table.points[i].points), 6, true) << '\n';
        }
        out << '\n';
    }

    out << "wBorda totals\n";
    out << "  " << pad("rule", name_w) << "  " << pad("sum", 5, true) << "  " << pad("mean", 6, true) << "  "
        << pad("std", 6, true) << '\n';
    for (const auto& t : table.totals) {
        out << "  " << pad(display_name(t.rule), name_w) << "  " << pad(std::to_string(t.sum), 5, true) << "  "
            << pad(fixed2(t.mean), 6, true) << "  " << pad(fixed2(t.stdev), 6, true) << '\n';
    }
    return out.str();
}

RankingTable write_reports(const std::vector<CellRecord>& records, const std::filesystem::path& dir) {
    std::vector<CellResult> cells;
    std::map<CellId, std::string> plans;
    for (const auto& r : records) {
        cells.push_back(r.cell);
        plans.emplace(id_of(r.cell), r.plan);
    }
    auto table = wborda_rank(std::move(cells));

    std::vector<CellRecord> ranked;
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        ranked.push_back({plans[id_of(table.cells[i])], table.cells[i], table.points[i].points});
    }

    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw DataError("cannot write '" + (dir / name).string() + "'");
        return f;
    };
    {
        auto f = open("cells.jsonl");
        write_cells_jsonl(ranked, f);
    }
    {
        auto f = open("ranking.json");
        f << ranking_to_json(table).dump(2) << '\n';
    }
    {
        auto f = open("summary.txt");
        f << format_summary(table);
    }
    return table;
}

}  // namespace wmr
