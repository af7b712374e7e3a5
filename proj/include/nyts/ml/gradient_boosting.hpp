#pragma once

#include "nyts/matrix.hpp"            // nyts::code_matrix
#include "nyts/ml/decision_tree.hpp"  // nyts::ml::decision_tree

#include <cstddef>  // std::size_t
#include <cstdint>  // std::uint64_t
#include <span>     // std::span
#include <vector>   // std::vector

namespace nyts::ml {

struct gbm_config {
    std::size_t n_stages{ 100 };
    /// Shrinkage applied to every stage, in (0, 1].
    double shrinkage{ 0.1 };
    /// Depth cap of each regression tree; 1 gives stumps.
    std::size_t max_depth{ 3 };
    std::size_t min_samples{ 10 };
    /// Recorded for provenance; training itself draws no random numbers.
    std::uint64_t seed{ 0 };

    bool operator==(const gbm_config &) const = default;
};

/// Additive log-odds model F(x) = initial_score + shrinkage * sum_s stage_s(x).
struct gbm_model {
    double initial_score{ 0.0 };
    double shrinkage{ 0.1 };
    std::vector<decision_tree> stages;
    /// Mean training log-loss after the prior (index 0) and after each stage.
    std::vector<double> training_loss;

    bool operator==(const gbm_model &) const = default;
};

/// Regression tree on categorical codes: multiway splits chosen by squared-error reduction of
/// `residuals`, leaves set to the Newton step sum(residual) / max(sum(hessian), 1e-12).
[[nodiscard]] decision_tree fit_regression_tree(const code_matrix &x, std::span<const double> residuals, std::span<const double> hessians, std::size_t max_depth, std::size_t min_samples);

/// Gradient boosting on binary log-loss. F0 = log(p/(1-p)); each stage fits a regression tree to
/// y - sigmoid(F) and adds shrinkage times its Newton leaf values. Throws nyts::training_error
/// when only one class is present or the configuration is invalid.
[[nodiscard]] gbm_model fit_gbm(const code_matrix &x, std::span<const int> y, const gbm_config &cfg = {});

[[nodiscard]] double gbm_score(const gbm_model &model, std::span<const int> x);
[[nodiscard]] double predict_proba_gbm(const gbm_model &model, std::span<const int> x);

/// Mean binary cross-entropy of probabilities `p` against labels `y`.
[[nodiscard]] double mean_log_loss(std::span<const double> p, std::span<const int> y);

}  // namespace nyts::ml
