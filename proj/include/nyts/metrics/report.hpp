#pragma once

#include "nyts/metrics/confusion.hpp"  // nyts::metrics::confusion_matrix, nyts::metrics::class_metrics

#include <cstddef>      // std::size_t
#include <span>         // std::span
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace nyts::metrics {

struct metric_triple {
    double precision{ 0.0 };
    double recall{ 0.0 };
    double f1{ 0.0 };

    bool operator==(const metric_triple &) const = default;
};

struct class_report {
    /// Ascending; parallel to per_class.
    std::vector<int> labels;
    std::vector<class_metrics> per_class;
    metric_triple macro_avg;
    metric_triple weighted_avg;
    double accuracy{ 0.0 };
    std::size_t total{ 0 };

    bool operator==(const class_report &) const = default;
};

/// Unweighted mean of each metric over the classes.
[[nodiscard]] metric_triple macro_average(std::span<const metric_triple> per_class);
/// Support-weighted mean of each metric. Throws nyts::validation_error when supports sum to 0.
[[nodiscard]] metric_triple weighted_average(std::span<const metric_triple> per_class, std::span<const std::size_t> supports);

[[nodiscard]] class_report report(const confusion_matrix &cm);
[[nodiscard]] class_report report(std::span<const int> y_true, std::span<const int> y_pred, std::span<const int> labels = {});

/// Display name of a class: 1 is "Yes", 0 is "No", anything else its number.
[[nodiscard]] std::string class_name(int label);

/// Precision / Recall / F1-Score / Cases table, classes in descending label order (Yes before No),
/// then Macro Avg and Weighted Avg, values rounded to two decimals, then the accuracy line.
[[nodiscard]] std::string render_report(const class_report &report, std::string_view title = {});

/// Full-precision JSON form of the report.
[[nodiscard]] std::string report_json(const class_report &report);

}  // namespace nyts::metrics
