#pragma once

#include "nyts/matrix.hpp"  // nyts::real_matrix

#include <span>    // std::span
#include <vector>  // std::vector

namespace nyts::ml {

/// Per-class Gaussian likelihoods under conditional independence of the features.
struct gaussian_nb_model {
    std::vector<int> classes;      ///< ascending
    std::vector<double> priors;    ///< class frequencies
    real_matrix means;             ///< classes x features
    real_matrix variances;         ///< classes x features, each >= variance_floor
    double variance_floor{ 0.0 };

    [[nodiscard]] std::size_t feature_count() const noexcept { return means.cols(); }

    bool operator==(const gaussian_nb_model &) const = default;
};

/// Maximum-likelihood means and (population) variances per class. Variances are floored at
/// 1e-9 * max(largest column variance of `x`, 1e-9), which keeps constant features finite.
/// Throws nyts::training_error for empty input or mismatched shapes.
[[nodiscard]] gaussian_nb_model fit_gaussian_nb(const real_matrix &x, std::span<const int> y);

/// log P(Y=c) + sum_i log N(x_i; mu_ic, var_ic) for each class.
[[nodiscard]] std::vector<double> joint_log_likelihood(const gaussian_nb_model &model, std::span<const double> x);

/// Posterior per class (model.classes order), normalised with log-sum-exp.
[[nodiscard]] std::vector<double> predict_proba_nb(const gaussian_nb_model &model, std::span<const double> x);

}  // namespace nyts::ml
