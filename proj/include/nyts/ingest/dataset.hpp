#pragma once

#include "nyts/matrix.hpp"  // nyts::code_matrix

#include <cstddef>      // std::size_t
#include <span>         // std::span
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace nyts::ingest {

inline constexpr std::string_view label_column = "__label__";

/// Modeling-ready data: integer answer codes (0 = unanswered) and binary labels.
struct dataset {
    std::vector<std::string> feature_names;
    code_matrix features;
    std::vector<int> labels;
    std::vector<std::size_t> row_ids;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t feature_count() const noexcept { return feature_names.size(); }
    [[nodiscard]] std::size_t count_label(int label) const;

    /// Rows picked by position, in the given order.
    [[nodiscard]] dataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const dataset &) const = default;
};

/// Prepared-dataset CSV: feature columns followed by `__label__`.
[[nodiscard]] std::string to_prepared_csv(const dataset &ds);

/// Reads a prepared-dataset CSV; row_ids become 0..n-1. Throws nyts::input_error.
[[nodiscard]] dataset read_prepared_csv(std::string_view text);

}  // namespace nyts::ingest
