#pragma once
// Comma-separated datasets: mandatory header row, decimal-point numerics,
// one label column holding exactly two distinct values.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wmr/core_types.hpp"

namespace wmr {

/// label_column is a header name, or a 0-based column index when no header
/// cell has that name. Rows whose positive_label matches map to Omega2.
Dataset ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                   const std::string& positive_label);

/// Writes features with round-trip precision and a trailing "label" column
/// holding 0 (Omega1) / 1 (Omega2).
void export_csv(const Dataset& data, std::ostream& out);
void export_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace wmr
