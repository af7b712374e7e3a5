#include "nyts/ingest/raw_table.hpp"

#include "nyts/csv.hpp"         // nyts::csv::parse
#include "nyts/exceptions.hpp"  // nyts::input_error

#include "fmt/format.h"  // fmt::format
#include "fmt/ranges.h"  // fmt::join

#include <charconv>       // std::from_chars
#include <cmath>          // std::floor
#include <unordered_set>  // std::unordered_set

namespace nyts::ingest {

std::optional<std::size_t> raw_table::column_index(const std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<std::string> raw_table::unknown_columns() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (!in_catalog[i]) {
            out.push_back(columns[i]);
        }
    }
    return out;
}

std::size_t raw_table::null_count() const {
    std::size_t n = 0;
    for (const auto &row : rows) {
        for (const cell &c : row) {
            n += c.has_value() ? 0 : 1;
        }
    }
    return n;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

cell parse_cell(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        return std::nullopt;
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && ptr == text.data() + text.size()) {
        return value;
    }
    double real = 0.0;
    const auto [rptr, rec] = std::from_chars(text.data(), text.data() + text.size(), real);
    if (rec == std::errc{} && rptr == text.data() + text.size() && std::floor(real) == real && std::abs(real) < 1e9) {
        return static_cast<int>(real);
    }
    return std::nullopt;
}

}  // namespace

raw_table parse_csv(const std::string_view text, const schema::question_catalog &catalog) {
    const std::vector<csv::record> records = csv::parse(text);
    if (records.empty()) {
        throw input_error{ "missing header row" };
    }

    std::unordered_set<std::string> known;
    for (const schema::survey_question &q : catalog.questions()) {
        for (const schema::feature_column &col : schema::columns_of(q)) {
            known.insert(col.name);
        }
    }

    raw_table table;
    std::unordered_set<std::string> seen;
    for (const std::string &name : records.front().fields) {
        std::string column{ trim(name) };
        if (!seen.insert(column).second) {
            throw input_error{ fmt::format("line {}: duplicate column '{}'", records.front().line, column) };
        }
        table.in_catalog.push_back(known.contains(column));
        table.columns.push_back(std::move(column));
    }
    if (std::find(table.in_catalog.begin(), table.in_catalog.end(), true) == table.in_catalog.end()) {
        throw input_error{ fmt::format("header shares no column with catalog '{}'; unmatched columns: {}", catalog.name(), fmt::join(table.columns, ", ")) };
    }

    const std::size_t arity = table.columns.size();
    table.rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const csv::record &rec = records[r];
        if (rec.fields.size() != arity) {
            throw input_error{ fmt::format("line {}: expected {} fields, found {}", rec.line, arity, rec.fields.size()) };
        }
        std::vector<cell> row;
        row.reserve(arity);
        for (const std::string &field : rec.fields) {
            row.push_back(parse_cell(field));
        }
        table.rows.push_back(std::move(row));
        table.row_ids.push_back(r - 1);
    }
    if (table.rows.empty()) {
        throw input_error{ "no data rows after the header" };
    }
    return table;
}

raw_table impute_nulls(raw_table table) {
    for (auto &row : table.rows) {
        for (cell &c : row) {
            if (!c) {
                c = schema::unanswered;
            }
        }
    }
    return table;
}

std::string to_csv(const raw_table &table) {
    std::string out = csv::format_row(table.columns);
    std::vector<std::string> fields;
    for (const auto &row : table.rows) {
        fields.clear();
        for (const cell &c : row) {
            fields.push_back(c ? std::to_string(*c) : std::string{});
        }
        out += csv::format_row(fields);
    }
    return out;
}

}  // namespace nyts::ingest
