#pragma once

#include "nyts/ingest/raw_table.hpp"  // nyts::ingest::raw_table
#include "nyts/schema/catalog.hpp"    // nyts::schema::question_catalog

#include <cstddef>      // std::size_t
#include <cstdint>      // std::uint64_t
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <utility>      // std::pair
#include <vector>       // std::vector

namespace nyts::ingest {

/// Planted intention model for synthetic surveys.
///
/// The latent score is `intercept + sum_j weight_j * (x_j - center_j)`, where x_j is the
/// answer code in predictor column j (0 when unanswered) and center_j the mean of that
/// column's non-zero codes. The Q16 label is `score + noise * L > 0` with L standard
/// logistic, so noise 0 makes the label a deterministic threshold of the predictors.
struct signal_config {
    std::vector<std::pair<std::string, double>> weights;
    double intercept{ 0.0 };
    double noise{ 1.0 };
    /// Probability that a predictor question is left unanswered.
    double missing_rate{ 0.02 };
    /// Probability that a target question is left unanswered.
    double target_missing_rate{ 0.02 };
    /// Probability that a respondent has tried some tobacco product (fails the cohort filter).
    double ever_smoker_rate{ 0.3 };
    /// Probability that an option of a multi-select question is ticked.
    double select_rate{ 0.3 };

    bool operator==(const signal_config &) const = default;
};

/// Parses `Q6:1.5,Q27:-2;intercept=-1;noise=0;missing=0.02;target-missing=0.02;ever=0.3;select=0.3`.
/// Every part is optional; weights come first. Throws nyts::input_error.
[[nodiscard]] signal_config parse_signal(std::string_view text);

[[nodiscard]] std::string to_string(const signal_config &signal);

/// Draws `n_rows` respondents over every catalog column. Deterministic per seed.
/// Throws nyts::input_error when n_rows is 0 or a weight names a non-predictor column.
[[nodiscard]] raw_table generate_synthetic(std::size_t n_rows, const schema::question_catalog &catalog, const signal_config &signal, std::uint64_t seed);

}  // namespace nyts::ingest
