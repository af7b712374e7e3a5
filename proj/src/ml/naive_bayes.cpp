#include "nyts/ml/naive_bayes.hpp"

#include "nyts/exceptions.hpp"  // nyts::training_error, nyts::validation_error
#include "nyts/ml/softmax.hpp"  // nyts::ml::softmax

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::max, std::lower_bound
#include <cmath>      // std::log, std::exp
#include <numbers>    // std::numbers::pi
#include <set>        // std::set

namespace nyts::ml {

gaussian_nb_model fit_gaussian_nb(const real_matrix &x, const std::span<const int> y) {
    if (x.rows() != y.size()) {
        throw training_error{ fmt::format("feature matrix has {} rows but {} labels were given", x.rows(), y.size()) };
    }
    if (y.empty()) {
        throw training_error{ "cannot fit naive Bayes on an empty training set" };
    }
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    gaussian_nb_model model;
    const std::set<int> classes(y.begin(), y.end());
    model.classes.assign(classes.begin(), classes.end());
    const std::size_t k = model.classes.size();
    const auto class_index = [&](const int label) {
        return static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), label) - model.classes.begin());
    };

    std::vector<double> counts(k, 0.0);
    model.means = real_matrix{ k, d };
    model.variances = real_matrix{ k, d };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = class_index(y[i]);
        counts[c] += 1.0;
        const auto row = x.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            model.means(c, j) += row[j];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            model.means(c, j) /= counts[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = class_index(y[i]);
        const auto row = x.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - model.means(c, j);
            model.variances(c, j) += dev * dev;
        }
    }

    // largest column variance over the whole training matrix
    double max_variance = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += x(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            var += (x(i, j) - mean) * (x(i, j) - mean);
        }
        max_variance = std::max(max_variance, var / static_cast<double>(n));
    }
    model.variance_floor = 1e-9 * std::max(max_variance, 1e-9);

    for (std::size_t c = 0; c < k; ++c) {
        model.priors.push_back(counts[c] / static_cast<double>(n));
        for (std::size_t j = 0; j < d; ++j) {
            model.variances(c, j) = std::max(model.variances(c, j) / counts[c], model.variance_floor);
        }
    }
    return model;
}

std::vector<double> joint_log_likelihood(const gaussian_nb_model &model, const std::span<const double> x) {
    if (x.size() != model.feature_count()) {
        throw validation_error{ fmt::format("naive Bayes model expects {} features, got {}", model.feature_count(), x.size()) };
    }
    std::vector<double> out(model.classes.size());
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        double total = std::log(model.priors[c]);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double var = model.variances(c, j);
            const double dev = x[j] - model.means(c, j);
            total += -0.5 * std::log(2.0 * std::numbers::pi * var) - dev * dev / (2.0 * var);
        }
        out[c] = total;
    }
    return out;
}

std::vector<double> predict_proba_nb(const gaussian_nb_model &model, const std::span<const double> x) {
    // softmax shifts by the largest term; subtracting log_sum_exp instead loses the
    // normalization once the log-likelihoods reach magnitudes where top + log(total) == top
    return softmax(joint_log_likelihood(model, x));
}

}  // namespace nyts::ml
