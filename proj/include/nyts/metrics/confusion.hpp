#pragma once

#include <cstddef>  // std::size_t
#include <span>     // std::span
#include <vector>   // std::vector

namespace nyts::metrics {

/// Counts x_ij of examples predicted as class i whose observed class is j.
struct confusion_matrix {
    /// Class labels, ascending. Row/column k refers to labels[k].
    std::vector<int> labels;
    /// labels.size() squared counts, row-major by predicted class.
    std::vector<std::size_t> counts;

    [[nodiscard]] std::size_t class_count() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t at(std::size_t predicted, std::size_t observed) const { return counts[predicted * labels.size() + observed]; }
    /// Position of `label` in `labels`; throws nyts::validation_error when absent.
    [[nodiscard]] std::size_t index_of(int label) const;
    [[nodiscard]] std::size_t total() const;
    [[nodiscard]] std::size_t trace() const;

    bool operator==(const confusion_matrix &) const = default;
};

/// Tallies (y_true, y_pred) pairs. With an empty `labels`, the class set is every label that
/// occurs in either vector. Throws nyts::validation_error on unequal or zero lengths and on
/// labels outside a declared class set.
[[nodiscard]] confusion_matrix confusion(std::span<const int> y_true, std::span<const int> y_pred, std::span<const int> labels = {});

/// trace / total. Throws nyts::validation_error when the matrix is empty.
[[nodiscard]] double accuracy(const confusion_matrix &cm);

struct class_metrics {
    double precision{ 0.0 };
    double recall{ 0.0 };
    double f1{ 0.0 };
    /// Observed examples of the class.
    std::size_t support{ 0 };
    /// Set when the metric's denominator was zero; the metric is then reported as 0.
    bool precision_zero_division{ false };
    bool recall_zero_division{ false };
    bool f1_zero_division{ false };

    bool operator==(const class_metrics &) const = default;
};

/// One-vs-rest precision TP/(TP+FP), recall TP/(TP+FN) and F1 = 2PR/(P+R) for `label`.
[[nodiscard]] class_metrics precision_recall_f1(const confusion_matrix &cm, int label);

/// Harmonic mean 2PR/(P+R); 0 when P + R = 0.
[[nodiscard]] double f1_score(double precision, double recall);

}  // namespace nyts::metrics
