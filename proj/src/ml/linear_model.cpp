#include "nyts/ml/linear_model.hpp"

#include "nyts/exceptions.hpp"  // nyts::training_error

#include "fmt/format.h"  // fmt::format

#include <cmath>  // std::exp, std::log1p, std::isfinite, std::sqrt

namespace nyts::ml {

void gd_config::validate() const {
    if (!(learning_rate > 0.0)) {
        throw training_error{ fmt::format("learning rate must be positive, got {}", learning_rate) };
    }
    if (!(tolerance > 0.0)) {
        throw training_error{ fmt::format("convergence threshold must be positive, got {}", tolerance) };
    }
    if (max_iters < 1) {
        throw training_error{ "max_iters must be at least 1" };
    }
    if (!(l2 >= 0.0)) {
        throw training_error{ fmt::format("L2 penalty must be non-negative, got {}", l2) };
    }
    if (!(weight_norm_cap > 0.0)) {
        throw training_error{ fmt::format("weight norm cap must be positive, got {}", weight_norm_cap) };
    }
}

double weight_vector::dot(const std::span<const double> x) const {
    double z = values[0];
    for (std::size_t j = 0; j < x.size(); ++j) {
        z += values[j + 1] * x[j];
    }
    return z;
}

bool weight_vector::is_finite() const {
    for (const double v : values) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

namespace {

void check_shapes(const real_matrix &x, const std::size_t n_labels) {
    if (x.rows() != n_labels) {
        throw training_error{ fmt::format("feature matrix has {} rows but {} targets were given", x.rows(), n_labels) };
    }
    if (n_labels == 0) {
        throw training_error{ "cannot fit on an empty training set" };
    }
}

double norm(const std::vector<double> &v) {
    double s = 0.0;
    for (const double e : v) {
        s += e * e;
    }
    return std::sqrt(s);
}

bool strictly_separates(const weight_vector &w, const real_matrix &x, const std::span<const int> y) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double z = w.dot(x.row(i));
        if (y[i] == 1 ? !(z > 0.0) : !(z < 0.0)) {
            return false;
        }
    }
    return true;
}

// log(1 + exp(z)) without overflow
double softplus(const double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

template <typename Loss, typename Gradient>
linear_fit descend(const std::size_t n, const std::size_t d, const gd_config &cfg, Loss loss, Gradient gradient, const bool cap_norm) {
    cfg.validate();
    linear_fit fit{ weight_vector::zeros(d), {} };
    std::vector<double> &w = fit.weights.values;
    const double scale = cfg.learning_rate / static_cast<double>(n);

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        const std::vector<double> grad = gradient(fit.weights);
        double step_sq = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            const double step = scale * grad[j];
            w[j] -= step;
            step_sq += step * step;
        }
        fit.report.iterations = it;
        if (!fit.weights.is_finite()) {
            throw training_error{ fmt::format("gradient descent diverged at iteration {} (non-finite weights)", it) };
        }
        if (cap_norm && norm(w) > cfg.weight_norm_cap) {
            fit.report.separated = true;
            break;
        }
        if (std::sqrt(step_sq) < cfg.tolerance) {
            fit.report.converged = true;
            break;
        }
    }
    fit.report.final_loss = loss(fit.weights);
    if (!std::isfinite(fit.report.final_loss)) {
        throw training_error{ fmt::format("gradient descent diverged at iteration {} (non-finite loss)", fit.report.iterations) };
    }
    return fit;
}

}  // namespace

double rss(const weight_vector &w, const real_matrix &x, const std::span<const double> y) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double e = y[i] - w.dot(x.row(i));
        total += e * e;
    }
    return total;
}

std::vector<double> rss_gradient(const weight_vector &w, const real_matrix &x, const std::span<const double> y) {
    std::vector<double> grad(w.values.size(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        const double e = y[i] - w.dot(row);
        grad[0] -= 2.0 * e;
        for (std::size_t j = 0; j < row.size(); ++j) {
            grad[j + 1] -= 2.0 * e * row[j];
        }
    }
    return grad;
}

linear_fit fit_linear_regression(const real_matrix &x, const std::span<const double> y, const gd_config &cfg) {
    check_shapes(x, y.size());
    return descend(
        x.rows(), x.cols(), cfg,
        [&](const weight_vector &w) { return rss(w, x, y); },
        [&](const weight_vector &w) {
            std::vector<double> g = rss_gradient(w, x, y);
            for (std::size_t j = 1; j < g.size(); ++j) {
                g[j] += cfg.l2 * w.values[j];
            }
            return g;
        },
        false);
}

double sigmoid(const double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double log_loss(const weight_vector &w, const real_matrix &x, const std::span<const int> y, const double l2) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double z = w.dot(x.row(i));
        // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
        total += softplus(z) - static_cast<double>(y[i]) * z;
    }
    double penalty = 0.0;
    for (std::size_t j = 1; j < w.values.size(); ++j) {
        penalty += w.values[j] * w.values[j];
    }
    return total + 0.5 * l2 * penalty;
}

std::vector<double> log_loss_gradient(const weight_vector &w, const real_matrix &x, const std::span<const int> y, const double l2) {
    std::vector<double> grad(w.values.size(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        const double err = sigmoid(w.dot(row)) - static_cast<double>(y[i]);
        grad[0] += err;
        for (std::size_t j = 0; j < row.size(); ++j) {
            grad[j + 1] += err * row[j];
        }
    }
    for (std::size_t j = 1; j < grad.size(); ++j) {
        grad[j] += l2 * w.values[j];
    }
    return grad;
}

linear_fit fit_logistic(const real_matrix &x, const std::span<const int> y, const gd_config &cfg) {
    check_shapes(x, y.size());
    for (const int label : y) {
        if (label != 0 && label != 1) {
            throw training_error{ fmt::format("logistic regression needs 0/1 labels, found {}", label) };
        }
    }
    linear_fit fit = descend(
        x.rows(), x.cols(), cfg,
        [&](const weight_vector &w) { return log_loss(w, x, y, cfg.l2); },
        [&](const weight_vector &w) { return log_loss_gradient(w, x, y, cfg.l2); },
        true);
    // The weight norm only grows logarithmically on separable data, so the cap is rarely hit
    // and the shrinking steps look like convergence. A hyperplane that strictly classifies
    // every row proves no finite optimum exists (unless a penalty is applied).
    if (cfg.l2 == 0.0 && x.rows() > 0 && strictly_separates(fit.weights, x, y)) {
        fit.report.separated = true;
    }
    if (fit.report.separated) {
        fit.report.converged = false;
    }
    return fit;
}

double predict_proba_logistic(const weight_vector &w, const std::span<const double> x) {
    return sigmoid(w.dot(x));
}

}  // namespace nyts::ml
