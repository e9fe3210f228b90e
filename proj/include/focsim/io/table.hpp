/**
 * @file table.hpp
 * @brief Result tables and their CSV / JSON renderings.
 *
 * Numbers are written with 17 significant digits (CSV) or the shortest
 * round-trip form (JSON), so parsing either output recovers every double
 * exactly. Both renderings depend only on the table contents.
 */

#pragma once

#include "../errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace focsim::io {

inline constexpr std::string_view kTableSchema = "focsim-table/1";

/// Output could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Column {
    std::string name;
    std::string unit; ///< empty for dimensionless and label columns

    [[nodiscard]] std::string header() const { return unit.empty() ? name : name + "_" + unit; }
    bool operator==(const Column&) const = default;
};

using Cell = std::variant<double, std::string>;

struct ResultTable {
    std::string schema{kTableSchema};
    std::vector<std::pair<std::string, std::string>> metadata; ///< in insertion order; "constants" is required
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;

    void set_meta(const std::string& key, const std::string& value) {
        for (auto& [k, v] : metadata) {
            if (k == key) {
                v = value;
                return;
            }
        }
        metadata.emplace_back(key, value);
    }

    [[nodiscard]] const std::string* meta(std::string_view key) const {
        for (const auto& [k, v] : metadata)
            if (k == key) return &v;
        return nullptr;
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                        std::to_string(columns.size()) + " columns");
        rows.push_back(std::move(row));
    }

    void validate() const {
        if (!meta("constants")) throw std::invalid_argument("table metadata lacks the constants fingerprint");
        for (const auto& r : rows)
            if (r.size() != columns.size()) throw std::invalid_argument("ragged table");
    }
};

[[nodiscard]] inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Metadata values as numbers are rendered.
[[nodiscard]] inline std::string meta_number(double v) { return format_double(v); }

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

} // namespace detail

/// `# schema=..., constants=..., key=value` line, a header line, then one line per row.
inline void emit_csv(const ResultTable& t, std::ostream& os) {
    t.validate();
    os << "# schema=" << t.schema;
    for (const auto& [k, v] : t.metadata) os << ", " << k << '=' << v;
    os << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << detail::csv_field(t.columns[c].header());
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            if (const auto* d = std::get_if<double>(&row[c]))
                os << format_double(*d);
            else
                os << detail::csv_field(std::get<std::string>(row[c]));
        }
        os << '\n';
    }
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const ResultTable& t) {
    t.validate();
    nlohmann::ordered_json j;
    auto& meta = j["metadata"] = nlohmann::ordered_json::object();
    meta["schema"] = t.schema;
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    auto& cols = j["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (const auto* d = std::get_if<double>(&cell))
                r.push_back(std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(format_double(*d)));
            else
                r.push_back(std::get<std::string>(cell));
        }
        rows.push_back(std::move(r));
    }
    return j;
}

/// Non-finite numbers are written as the strings "nan", "inf", "-inf".
inline void emit_json(const ResultTable& t, std::ostream& os) { os << to_json(t).dump(2) << '\n'; }

enum class Format { csv, json };

inline void emit_table(const ResultTable& t, Format f, std::ostream& os) {
    if (f == Format::csv)
        emit_csv(t, os);
    else
        emit_json(t, os);
    if (!os) throw IoError("failed to write table");
}

[[nodiscard]] inline std::string render(const ResultTable& t, Format f) {
    std::ostringstream os;
    emit_table(t, f, os);
    return os.str();
}

// -------------------------------------------------------------- reading back

namespace detail {
inline Cell parse_cell(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size()) return v;
    return s;
}
} // namespace detail

/**
 * Reads a table written by emit_json. Column units come back exactly; cells
 * that were non-finite numbers come back as doubles.
 */
[[nodiscard]] inline ResultTable parse_json_table(std::string_view text) {
    const auto j = nlohmann::ordered_json::parse(text);
    ResultTable t;
    t.metadata.clear();
    for (const auto& [k, v] : j.at("metadata").items()) {
        if (k == "schema")
            t.schema = v.get<std::string>();
        else
            t.metadata.emplace_back(k, v.get<std::string>());
    }
    for (const auto& c : j.at("columns")) t.columns.push_back({c.at("name").get<std::string>(), c.at("unit").get<std::string>()});
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& cell : r) {
            if (cell.is_number())
                row.emplace_back(cell.get<double>());
            else
                row.push_back(detail::parse_cell(cell.get<std::string>()));
        }
        t.add_row(std::move(row));
    }
    return t;
}

/**
 * Reads a table written by emit_csv. Column headers are kept whole in
 * Column::name (the name/unit split is not recoverable from "name_unit").
 */
[[nodiscard]] inline ResultTable parse_csv_table(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    ResultTable t;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw std::invalid_argument("missing metadata line");
    std::istringstream meta(line.substr(2));
    std::string item;
    while (std::getline(meta, item, ',')) {
        if (!item.empty() && item.front() == ' ') item.erase(0, 1);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad metadata item: " + item);
        const std::string key = item.substr(0, eq);
        if (key == "schema")
            t.schema = item.substr(eq + 1);
        else
            t.metadata.emplace_back(key, item.substr(eq + 1));
    }
    if (!std::getline(is, line)) throw std::invalid_argument("missing header line");
    for (auto& h : detail::split_csv_line(line)) t.columns.push_back({h, ""});
    while (std::getline(is, line)) {
        std::vector<Cell> row;
        for (const auto& f : detail::split_csv_line(line)) row.push_back(detail::parse_cell(f));
        t.add_row(std::move(row));
    }
    return t;
}

} // namespace focsim::io
