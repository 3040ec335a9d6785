// Copyright 2026 The qantenna Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qantenna/error.hpp"

namespace qantenna {

/// Numeric table with '#'-prefixed metadata lines, as exported by the CLI.
struct Table {
    std::vector<std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const Table&) const = default;
};

/// 17 significant digits, '.' decimal, locale independent; -0 is written as 0.
inline std::string format_double(double x)
{
    if (x == 0.0)
        x = 0.0;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::ConfigParseError, "not a number: '" + std::string(s) + "'");
    return v;
}

inline void write_csv(std::ostream& os, const Table& t)
{
    for (const auto& m : t.metadata)
        os << "# " << m << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

inline Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    bool header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        return out;
    };
    while (std::getline(is, line)) {
        if (!header && line.rfind("# ", 0) == 0) {
            t.metadata.push_back(line.substr(2));
            continue;
        }
        if (!header) {
            t.columns = split(line);
            header = true;
            continue;
        }
        if (line.empty())
            continue;
        auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw Error(ErrorCode::ConfigParseError, "row width does not match the header");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(parse_double(c));
        t.rows.push_back(std::move(row));
    }
    if (!header)
        throw Error(ErrorCode::ConfigParseError, "CSV without header row");
    return t;
}

/// Columns as arrays plus the resolved configuration.
inline nlohmann::json to_json(const Table& t, const nlohmann::json& config)
{
    nlohmann::json j;
    j["config"] = config;
    j["metadata"] = t.metadata;
    j["columns"] = t.columns;
    nlohmann::json data = nlohmann::json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        auto arr = nlohmann::json::array();
        for (const auto& row : t.rows)
            arr.push_back(row[c]);
        data[t.columns[c]] = std::move(arr);
    }
    j["data"] = std::move(data);
    return j;
}

enum class OutputFormat { Csv, Json };

inline std::string_view extension(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    return os;
}

/// Writes `stem` + extension under dir and returns the path written.
inline std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& t,
                                         OutputFormat fmt, const nlohmann::json& config)
{
    auto path = dir / (stem + std::string(extension(fmt)));
    auto os = open_output(path);
    if (fmt == OutputFormat::Csv)
        write_csv(os, t);
    else
        os << to_json(t, config).dump(1) << '\n';
    if (!os)
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    return path;
}

inline std::filesystem::path write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    auto os = open_output(path);
    os << j.dump(1) << '\n';
    if (!os)
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    return path;
}

} // namespace qantenna
