#pragma once

#include "nyts/ingest/dataset.hpp"            // nyts::ingest::dataset
#include "nyts/ingest/split.hpp"              // nyts::ingest::split_spec
#include "nyts/metrics/cross_validation.hpp"  // nyts::metrics::cv_config
#include "nyts/metrics/report.hpp"            // nyts::metrics::class_report
#include "nyts/ml/classifier.hpp"             // nyts::ml::model_spec, nyts::ml::model_kind

#include <array>        // std::array
#include <cstddef>      // std::size_t
#include <span>         // std::span
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace nyts::metrics {

struct comparison_row {
    ml::model_kind kind{ ml::model_kind::gb };
    /// Mean cross-validated accuracy on the training split.
    double training_score{ 0.0 };
    /// Accuracy on the held-out split of a model fitted to the whole training split.
    double test_score{ 0.0 };
    std::vector<double> fold_scores;
    class_report test_report;
};

struct comparison_table {
    std::vector<comparison_row> rows;
    std::size_t train_rows{ 0 };
    std::size_t test_rows{ 0 };
};

/// Model kinds compared by default, in table order.
inline constexpr std::array<ml::model_kind, 5> default_comparison_kinds{ ml::model_kind::tree, ml::model_kind::nb, ml::model_kind::logistic, ml::model_kind::forest, ml::model_kind::gb };

/// Splits `data`, then for every spec records the CV score on the training split and the
/// held-out accuracy. Throws nyts::validation_error when `specs` is empty.
[[nodiscard]] comparison_table compare_models(const ingest::dataset &data, const ingest::split_spec &split, std::span<const ml::model_spec> specs, const cv_config &cv = {});

/// Training Score / Test Score rows against one column per model, four decimals.
[[nodiscard]] std::string render_comparison(const comparison_table &table);

/// Data file: header `model,name,training_score,test_score`, one row per model, shortest
/// round-trip decimal reals.
[[nodiscard]] std::string comparison_csv(const comparison_table &table);

struct comparison_point {
    std::string model;
    std::string name;
    double training_score{ 0.0 };
    double test_score{ 0.0 };

    bool operator==(const comparison_point &) const = default;
};

/// Reads a comparison data file back. Throws nyts::input_error on a malformed file.
[[nodiscard]] std::vector<comparison_point> parse_comparison_csv(std::string_view text);

/// Grouped bar chart (training vs. test score per model) as a standalone SVG document.
[[nodiscard]] std::string comparison_svg(std::span<const comparison_point> points, std::string_view title = "Training and test accuracy");

}  // namespace nyts::metrics
