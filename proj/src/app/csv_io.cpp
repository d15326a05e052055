#include "wmr/app/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <vector>

namespace wmr {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Dataset ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                   const std::string& positive_label) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ": missing header row");
    const auto header = split_row(line);

    std::size_t label_at = header.size();
    if (auto it = std::find(header.begin(), header.end(), label_column); it != header.end()) {
        label_at = static_cast<std::size_t>(it - header.begin());
    } else {
        std::size_t idx = 0;
        const auto* end = label_column.data() + label_column.size();
        const auto res = std::from_chars(label_column.data(), end, idx);
        if (res.ec == std::errc() && res.ptr == end && idx < header.size()) label_at = idx;
    }
    if (label_at == header.size()) throw DataError(path.string() + ": no label column '" + label_column + "'");

    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_at) feature_names.push_back(header[c]);
    }
    if (feature_names.empty()) throw DataError(path.string() + ": no feature columns");

    std::vector<Sample> rows;
    std::vector<std::string> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
        if (cells.size() != header.size()) {
            throw DataError(where + "expected " + std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
        }
        Sample row;
        row.reserve(feature_names.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_at) continue;
            double v = 0.0;
            const auto& cell = cells[c];
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw DataError(where + "column '" + header[c] + "' is not a finite number: '" + cell + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        raw_labels.push_back(cells[label_at]);
    }
    if (rows.empty()) throw DataError(path.string() + ": no data rows");

    std::vector<std::string> distinct = raw_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() != 2) {
        throw DataError(path.string() + ": expected exactly two label values, found " + std::to_string(distinct.size()));
    }
    if (std::find(distinct.begin(), distinct.end(), positive_label) == distinct.end()) {
        throw DataError(path.string() + ": positive label '" + positive_label + "' does not occur");
    }

    std::vector<ClassLabel> labels;
    labels.reserve(raw_labels.size());
    for (const auto& l : raw_labels) labels.push_back(l == positive_label ? ClassLabel::Omega2 : ClassLabel::Omega1);
    return Dataset(path.stem().string(), std::move(rows), std::move(labels), std::move(feature_names));
}

void export_csv(const Dataset& data, std::ostream& out) {
    for (std::size_t j = 0; j < data.dimension(); ++j) {
        out << (data.feature_names().empty() ? "f" + std::to_string(j) : data.feature_names()[j]) << ',';
    }
    out << "label\n";
    for (std::size_t s = 0; s < data.size(); ++s) {
        for (double v : data.sample(s)) out << format_double(v) << ',';
        out << (data.label(s) == ClassLabel::Omega2 ? '1' : '0') << '\n';
    }
}

void export_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    export_csv(data, out);
}

}  // namespace wmr
