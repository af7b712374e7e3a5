#pragma once

#include "nyts/matrix.hpp"  // nyts::real_matrix

#include <cstddef>  // std::size_t
#include <span>     // std::span
#include <vector>   // std::vector

namespace nyts::ml {

/// Batch gradient-descent settings. The step is `w -= learning_rate * grad / n`,
/// training stops once the step's Euclidean norm drops below `tolerance`.
struct gd_config {
    double learning_rate{ 0.01 };
    double tolerance{ 1e-6 };
    std::size_t max_iters{ 10'000 };
    /// L2 penalty on the non-intercept weights; 0 disables it.
    double l2{ 0.0 };
    /// Logistic only: a weight norm above this marks the data as (quasi-)separable and stops training.
    double weight_norm_cap{ 100.0 };

    /// Throws nyts::training_error on non-positive rate/tolerance, zero iterations, or negative penalty.
    void validate() const;

    bool operator==(const gd_config &) const = default;
};

/// Intercept followed by one coefficient per feature; inputs are implicitly augmented with a leading 1.
struct weight_vector {
    std::vector<double> values;

    weight_vector() = default;
    explicit weight_vector(std::vector<double> v) :
        values{ std::move(v) } {}

    [[nodiscard]] static weight_vector zeros(std::size_t features) { return weight_vector{ std::vector<double>(features + 1, 0.0) }; }

    [[nodiscard]] std::size_t feature_count() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    [[nodiscard]] double intercept() const { return values.front(); }
    [[nodiscard]] double dot(std::span<const double> x) const;
    [[nodiscard]] bool is_finite() const;

    bool operator==(const weight_vector &) const = default;
};

struct fit_report {
    std::size_t iterations{ 0 };
    double final_loss{ 0.0 };
    bool converged{ false };
    /// Logistic only: the data are linearly separable (the fit classifies every row strictly
    /// correctly, or hit the weight-norm cap), so no finite optimum exists.
    bool separated{ false };

    bool operator==(const fit_report &) const = default;
};

struct linear_fit {
    weight_vector weights;
    fit_report report;
};

/// Residual sum of squares, sum_i (y_i - w^T x_i)^2.
[[nodiscard]] double rss(const weight_vector &w, const real_matrix &x, std::span<const double> y);
/// d RSS / d w.
[[nodiscard]] std::vector<double> rss_gradient(const weight_vector &w, const real_matrix &x, std::span<const double> y);

/// Least squares by batch gradient descent from w = 0. Throws nyts::training_error on
/// shape mismatch or when the loss becomes non-finite (message names the iteration).
[[nodiscard]] linear_fit fit_linear_regression(const real_matrix &x, std::span<const double> y, const gd_config &cfg = {});

[[nodiscard]] double sigmoid(double z);

/// Summed binary cross-entropy of sigmoid(w^T x) plus (l2/2)*|w_1..d|^2.
[[nodiscard]] double log_loss(const weight_vector &w, const real_matrix &x, std::span<const int> y, double l2 = 0.0);
[[nodiscard]] std::vector<double> log_loss_gradient(const weight_vector &w, const real_matrix &x, std::span<const int> y, double l2 = 0.0);

/// Binary logistic regression by batch gradient descent from w = 0. Labels must be 0/1.
[[nodiscard]] linear_fit fit_logistic(const real_matrix &x, std::span<const int> y, const gd_config &cfg = {});

[[nodiscard]] double predict_proba_logistic(const weight_vector &w, std::span<const double> x);

}  // namespace nyts::ml
