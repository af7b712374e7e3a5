#pragma once

#include "nyts/schema/catalog.hpp"  // nyts::schema::question_catalog

#include <cstddef>      // std::size_t
#include <optional>     // std::optional
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace nyts::ingest {

using cell = std::optional<int>;

/// Survey answers as read from a CSV; absent cells are nullopt.
struct raw_table {
    std::vector<std::string> columns;
    /// Parallel to `columns`: false for columns the catalog does not know (kept, but flagged).
    std::vector<bool> in_catalog;
    std::vector<std::vector<cell>> rows;
    /// Original 0-based data-row index of each row.
    std::vector<std::size_t> row_ids;

    [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> unknown_columns() const;
    [[nodiscard]] std::size_t null_count() const;

    bool operator==(const raw_table &) const = default;
};

/// Parses survey CSV text. Empty or non-numeric cells become null, "2.0" reads as 2.
/// Throws nyts::input_error on a missing header, ragged rows, no data rows, or a
/// header sharing no column with the catalog.
[[nodiscard]] raw_table parse_csv(std::string_view text, const schema::question_catalog &catalog);

/// Replaces every null with 0 (unanswered); all other cells are untouched.
[[nodiscard]] raw_table impute_nulls(raw_table table);

/// CSV text of the table; nulls are written as empty cells.
[[nodiscard]] std::string to_csv(const raw_table &table);

}  // namespace nyts::ingest
