#pragma once

#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinelat/ergodic.hpp"
#include "sinelat/sampling.hpp"
#include "sinelat/version.hpp"

namespace sinelat {

using Json = nlohmann::json;

/// Column-oriented report: one CSV table or one JSON document with the same
/// columns mirrored as object fields.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
    std::map<std::string, Json> meta;

    void add_row(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string csv_cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    std::ostringstream os;
    if (v.is_number_float()) {
        os << std::setprecision(17) << v.get<double>();
    } else {
        os << v;
    }
    return os.str();
}

inline void write_meta_comments(std::ostream& os, const std::map<std::string, Json>& meta) {
    os << "# version = " << kVersion << "\n";
    for (const auto& [key, value] : meta) {
        os << "# " << key << " = " << detail::csv_cell(value) << "\n";
    }
}

} // namespace detail

inline void write_table_csv(std::ostream& os, const Table& table) {
    detail::write_meta_comments(os, table.meta);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << detail::csv_cell(row[i]);
        }
        os << "\n";
    }
}

inline void write_table_json(std::ostream& os, const Table& table) {
    Json doc;
    doc["meta"] = Json::object();
    doc["meta"]["version"] = kVersion;
    for (const auto& [key, value] : table.meta) doc["meta"][key] = value;
    doc["rows"] = Json::array();
    for (const auto& row : table.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            obj[table.columns[i]] = row[i];
        }
        doc["rows"].push_back(std::move(obj));
    }
    os << doc.dump(2) << "\n";
}

/// CSV configuration record: comment header with a and shift, then one
/// integer index per line.
inline void write_configuration_csv(std::ostream& os, const LatticeConfiguration& config,
                                    double shift = 0.0,
                                    const std::map<std::string, Json>& extra_meta = {}) {
    std::map<std::string, Json> meta = extra_meta;
    meta["a"] = config.a.value;
    meta["shift"] = shift;
    detail::write_meta_comments(os, meta);
    os << "index\n";
    for (const auto idx : config.indices) os << idx << "\n";
}

inline void write_configuration_csv(std::ostream& os, const AhConfiguration& config,
                                    const std::map<std::string, Json>& extra_meta = {}) {
    write_configuration_csv(os, config.base, config.shift, extra_meta);
}

/// JSON configuration record {a, shift, indices}.
inline void write_configuration_json(std::ostream& os, const LatticeConfiguration& config,
                                     double shift = 0.0,
                                     const std::map<std::string, Json>& extra_meta = {}) {
    Json doc;
    doc["meta"] = Json::object();
    doc["meta"]["version"] = kVersion;
    for (const auto& [key, value] : extra_meta) doc["meta"][key] = value;
    doc["a"] = config.a.value;
    doc["shift"] = shift;
    doc["indices"] = config.indices;
    os << doc.dump(2) << "\n";
}

inline void write_configuration_json(std::ostream& os, const AhConfiguration& config,
                                     const std::map<std::string, Json>& extra_meta = {}) {
    write_configuration_json(os, config.base, config.shift, extra_meta);
}

/// Reads either serialization back into an AH-style record (shift 0 for
/// plain lattice configurations).
inline AhConfiguration read_configuration_csv(std::istream& is) {
    double a = 0.5, shift = 0.0;
    std::vector<std::int64_t> indices;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            const std::string value = line.substr(eq + 1);
            if (key == "a") a = std::stod(value);
            if (key == "shift") shift = std::stod(value);
            continue;
        }
        if (line == "index") continue;
        indices.push_back(std::stoll(line));
    }
    AhConfiguration config{LatticeConfiguration{LatticeSpacing(a), std::move(indices)}, shift};
    config.base.check_strictly_increasing();
    return config;
}

inline AhConfiguration read_configuration_json(std::istream& is) {
    Json doc;
    is >> doc;
    AhConfiguration config{
        LatticeConfiguration{LatticeSpacing(doc.at("a").get<double>()),
                             doc.at("indices").get<std::vector<std::int64_t>>()},
        doc.value("shift", 0.0)};
    config.base.check_strictly_increasing();
    return config;
}

/// Sequence export: one half-integer per line (exact .0/.5 decimals).
inline void write_sequence_text(std::ostream& os, const DeterministicSequence& seq) {
    os << "# version = " << kVersion << "\n";
    os << "# seed = " << seq.seed << "\n";
    os << "# stream = " << seq.stream_index << "\n";
    os << "# sites = " << seq.window_sites << "\n";
    for (const auto dp : seq.doubled_points) {
        if (dp % 2 == 0) {
            os << dp / 2;
        } else {
            if (dp < 0) os << '-';
            os << std::abs(dp) / 2 << ".5";
        }
        os << "\n";
    }
}

} // namespace sinelat
