#pragma once

#include "nyts/ingest/dataset.hpp"    // nyts::ingest::dataset
#include "nyts/ingest/raw_table.hpp"  // nyts::ingest::raw_table
#include "nyts/schema/catalog.hpp"    // nyts::schema::question_catalog

#include <cstddef>      // std::size_t
#include <set>          // std::set
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <utility>      // std::pair
#include <vector>       // std::vector

namespace nyts::ingest {

struct cohort_config {
    /// Non-smoker selection questions that are ignored. Q59 is off by default because
    /// its wording presupposes a purchase attempt.
    std::set<std::string> disabled{ "Q59" };
    /// Also require "never" on the non-e-smoker selection questions (Q28).
    bool non_e_smoker{ false };
};

struct cohort_summary {
    std::size_t rows_in{ 0 };
    std::size_t rows_out{ 0 };
    std::vector<std::string> questions;
    /// Per enabled question, rows whose answer was not the never code. A row may fail several.
    std::vector<std::pair<std::string, std::size_t>> failed_by_question;
};

struct cohort_result {
    raw_table table;
    cohort_summary summary;
};

/// Keeps rows answering "never" to every enabled cohort-selection question.
/// Throws nyts::input_error when an enabled question has no column.
[[nodiscard]] cohort_result filter_never_smokers(const raw_table &table, const schema::question_catalog &catalog, const cohort_config &config = {});

enum class target_policy {
    q16_only,
    any_of_six,
};

[[nodiscard]] std::string_view to_string(target_policy policy);
[[nodiscard]] target_policy parse_target_policy(std::string_view text);

inline constexpr std::string_view q16_id = "Q16";

struct target_summary {
    target_policy policy{ target_policy::q16_only };
    std::size_t rows_in{ 0 };
    std::size_t rows_out{ 0 };
    /// Rows whose required target answers were unanswered.
    std::size_t dropped_undefined{ 0 };
    std::size_t positives{ 0 };
    std::size_t negatives{ 0 };
    /// Predictor columns absent from the input; filled with 0.
    std::vector<std::string> absent_feature_columns;
};

struct target_result {
    dataset data;
    target_summary summary;
};

/// Labels each row and assembles the predictor matrix in catalog order (multi-selects expanded).
/// Target and cohort columns never enter the matrix. Throws nyts::input_error when a target
/// column is missing or a cell lies outside its column's domain.
[[nodiscard]] target_result derive_target(const raw_table &table, const schema::question_catalog &catalog, target_policy policy = target_policy::q16_only);

/// Throws nyts::input_error listing cells outside the declared domains of `layout`.
void validate_domains(const dataset &ds, const std::vector<schema::feature_column> &layout);

/// Indicator expansion: one 0/1 column per (feature, non-zero allowed code).
[[nodiscard]] dataset one_hot(const dataset &ds, const std::vector<schema::feature_column> &layout);

}  // namespace nyts::ingest
