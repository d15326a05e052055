#pragma once
// Report files written by `wmr run` / `wmr rank`:
//   cells.jsonl   one JSON record per (plan, dataset, classifier, K, rule) cell
//   ranking.json  points per cell and per-rule totals
//   summary.txt   the same numbers as aligned text tables
// Layout in docs/formats.md.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmr/evaluation.hpp"

namespace wmr {

inline constexpr const char* kRankingFormat = "wmr-ranking/1";

struct CellRecord {
    std::string plan;
    CellResult cell;
    std::optional<int> points;  // filled in once ranked
};

nlohmann::json to_json(const CellRecord& record);
CellRecord cell_record_from_json(const nlohmann::json& j);

/// One record per line, in the given order.
void write_cells_jsonl(const std::vector<CellRecord>& records, std::ostream& out);
std::vector<CellRecord> read_cells_jsonl(const std::filesystem::path& path);

nlohmann::json ranking_to_json(const RankingTable& table);

/// Per-column improvement/points tables followed by the totals, best first.
std::string format_summary(const RankingTable& table);

/// Ranks the records and writes cells.jsonl, ranking.json and summary.txt
/// into dir. Returns the ranking.
RankingTable write_reports(const std::vector<CellRecord>& records, const std::filesystem::path& dir);

}  // namespace wmr
