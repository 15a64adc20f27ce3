#pragma once

// Comma-separated dataset files: a header naming the feature columns and a
// final `label` column, then one segment per row.

#include <pnndt/dataset.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace pnndt {

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

/// Shortest text that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

struct ParsedTable {
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<Label> labels;
    bool has_labels = false;
};

inline ParsedTable parse_table(const std::filesystem::path& path, bool require_label) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("CSV file '" + path.string() + "' is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    ParsedTable t;
    for (auto h : split_commas(line)) t.names.emplace_back(trim(h));
    t.has_labels = !t.names.empty() && t.names.back() == "label";
    if (require_label && !t.has_labels)
        throw Error("CSV file '" + path.string() + "': last header column must be 'label'");
    if (t.has_labels) t.names.pop_back();
    const std::size_t width = t.names.size() + (t.has_labels ? 1 : 0);

    std::size_t line_no = 1, row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++row;
        auto cells = split_commas(line);
        if (cells.size() != width)
            throw Error("CSV row " + std::to_string(row) + " (line " + std::to_string(line_no) + ") has " +
                        std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
        for (std::size_t j = 0; j < t.names.size(); ++j) {
            double v;
            if (!parse_double(cells[j], v))
                throw Error("CSV row " + std::to_string(row) + " (line " + std::to_string(line_no) + "), column '" +
                            t.names[j] + "': '" + std::string(trim(cells[j])) + "' is not a number");
            t.values.push_back(v);
        }
        if (t.has_labels) {
            auto cell = trim(cells.back());
            if (cell != "0" && cell != "1")
                throw Error("CSV row " + std::to_string(row) + " (line " + std::to_string(line_no) + "): label '" +
                            std::string(cell) + "' is not 0 or 1");
            t.labels.push_back(cell == "1" ? kArtifact : kNormal);
        }
    }
    return t;
}

} // namespace detail

inline LabeledDataset load_csv(const std::filesystem::path& path) {
    auto t = detail::parse_table(path, true);
    return {std::move(t.values), std::move(t.labels), std::move(t.names)};
}

/// Feature rows for prediction; a trailing `label` column is accepted and ignored.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<double> values;
    std::size_t rows() const { return names.empty() ? 0 : values.size() / names.size(); }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * names.size(), names.size()}; }
};

inline FeatureTable load_features_csv(const std::filesystem::path& path) {
    auto t = detail::parse_table(path, false);
    return {std::move(t.names), std::move(t.values)};
}

inline void write_csv(std::ostream& out, const LabeledDataset& ds) {
    for (const auto& name : ds.feature_names()) out << name << ',';
    out << "label\n";
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (double v : ds.row(i)) out << detail::format_double(v) << ',';
        out << ds.label(i) << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const LabeledDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write CSV file '" + path.string() + "'");
    write_csv(out, ds);
    if (!out) throw Error("failed writing CSV file '" + path.string() + "'");
}

} // namespace pnndt
