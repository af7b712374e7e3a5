#include "nyts/ml/gradient_boosting.hpp"

#include "nyts/exceptions.hpp"       // nyts::training_error
#include "nyts/ml/linear_model.hpp"  // nyts::ml::sigmoid

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::max, std::stable_sort
#include <cmath>      // std::log, std::log1p, std::exp
#include <optional>   // std::optional

namespace nyts::ml {

namespace {

constexpr double hessian_floor = 1e-12;

class regression_builder {
  public:
    regression_builder(const code_matrix &x, const std::span<const double> residuals, const std::span<const double> hessians, const std::size_t max_depth, const std::size_t min_samples) :
        x_{ x },
        r_{ residuals },
        h_{ hessians },
        max_depth_{ max_depth },
        min_samples_{ min_samples } {
        int max_code = 0;
        for (const int v : x.data()) {
            if (v < 0) {
                throw training_error{ fmt::format("regression trees need non-negative codes, found {}", v) };
            }
            max_code = std::max(max_code, v);
        }
        sums_.resize(static_cast<std::size_t>(max_code) + 1);
        counts_.resize(static_cast<std::size_t>(max_code) + 1);
    }

    decision_tree build() {
        std::vector<std::size_t> rows(x_.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i] = i;
        }
        std::vector<std::size_t> features(x_.cols());
        for (std::size_t j = 0; j < features.size(); ++j) {
            features[j] = j;
        }
        grow(std::move(rows), std::move(features), 0);
        return std::move(tree_);
    }

  private:
    std::uint32_t make_leaf(const std::span<const std::size_t> rows) {
        double num = 0.0;
        double den = 0.0;
        for (const std::size_t i : rows) {
            num += r_[i];
            den += h_[i];
        }
        tree_node leaf;
        leaf.samples = static_cast<std::uint32_t>(rows.size());
        leaf.value = num / std::max(den, hessian_floor);
        tree_.nodes.push_back(std::move(leaf));
        return static_cast<std::uint32_t>(tree_.nodes.size() - 1);
    }

    // Squared-error reduction sum_c S_c^2/n_c - S^2/n, or nullopt with fewer than two codes.
    std::optional<double> reduction(const std::span<const std::size_t> rows, const std::size_t feature, const double parent_term) {
        touched_.clear();
        for (const std::size_t i : rows) {
            const auto code = static_cast<std::size_t>(x_(i, feature));
            if (counts_[code] == 0) {
                touched_.push_back(code);
            }
            sums_[code] += r_[i];
            ++counts_[code];
        }
        double children = 0.0;
        for (const std::size_t code : touched_) {
            children += sums_[code] * sums_[code] / static_cast<double>(counts_[code]);
            sums_[code] = 0.0;
            counts_[code] = 0;
        }
        if (touched_.size() < 2) {
            return std::nullopt;
        }
        return children - parent_term;
    }

    std::uint32_t grow(std::vector<std::size_t> rows, std::vector<std::size_t> features, const std::size_t depth) {
        if ((max_depth_ > 0 && depth >= max_depth_) || rows.size() < min_samples_ || features.empty()) {
            return make_leaf(rows);
        }
        double total = 0.0;
        for (const std::size_t i : rows) {
            total += r_[i];
        }
        const double parent_term = total * total / static_cast<double>(rows.size());

        std::optional<std::size_t> best;
        double best_reduction = split_tie_tolerance;
        for (const std::size_t f : features) {
            const std::optional<double> red = reduction(rows, f, parent_term);
            if (red && *red > best_reduction + (best ? split_tie_tolerance : 0.0)) {
                best = f;
                best_reduction = *red;
            }
        }
        if (!best) {
            return make_leaf(rows);
        }

        const std::size_t feature = *best;
        std::stable_sort(rows.begin(), rows.end(), [&](const std::size_t a, const std::size_t b) { return x_(a, feature) < x_(b, feature); });
        std::vector<std::pair<int, std::vector<std::size_t>>> groups;
        for (const std::size_t i : rows) {
            const int code = x_(i, feature);
            if (groups.empty() || groups.back().first != code) {
                groups.emplace_back(code, std::vector<std::size_t>{});
            }
            groups.back().second.push_back(i);
        }

        const auto index = static_cast<std::uint32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[index].is_leaf = false;
        tree_.nodes[index].feature = static_cast<std::uint32_t>(feature);
        tree_.nodes[index].score = best_reduction;
        tree_.nodes[index].samples = static_cast<std::uint32_t>(rows.size());
        tree_.nodes[index].fallback = make_leaf(rows);

        std::vector<std::size_t> remaining;
        for (const std::size_t f : features) {
            if (f != feature) {
                remaining.push_back(f);
            }
        }
        std::vector<std::pair<int, std::uint32_t>> children;
        for (auto &[code, members] : groups) {
            children.emplace_back(code, grow(std::move(members), remaining, depth + 1));
        }
        tree_.nodes[index].children = std::move(children);
        return index;
    }

    const code_matrix &x_;
    std::span<const double> r_;
    std::span<const double> h_;
    std::size_t max_depth_;
    std::size_t min_samples_;
    decision_tree tree_;
    std::vector<double> sums_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> touched_;
};

}  // namespace

decision_tree fit_regression_tree(const code_matrix &x, const std::span<const double> residuals, const std::span<const double> hessians, const std::size_t max_depth, const std::size_t min_samples) {
    if (x.rows() != residuals.size() || x.rows() != hessians.size()) {
        throw training_error{ "regression tree: residual and hessian counts must match the row count" };
    }
    if (x.rows() == 0) {
        throw training_error{ "cannot fit a regression tree on an empty training set" };
    }
    regression_builder builder{ x, residuals, hessians, max_depth, min_samples };
    return builder.build();
}

double mean_log_loss(const std::span<const double> p, const std::span<const int> y) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = y[i] == 1 ? p[i] : 1.0 - p[i];
        total -= std::log(std::max(q, 1e-300));
    }
    return p.empty() ? 0.0 : total / static_cast<double>(p.size());
}

namespace {

// log-loss of score F against y, stable in F: softplus(F) - y F
double loss_from_scores(const std::span<const double> f, const std::span<const int> y) {
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double z = f[i];
        const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        total += softplus - static_cast<double>(y[i]) * z;
    }
    return total / static_cast<double>(f.size());
}

}  // namespace

gbm_model fit_gbm(const code_matrix &x, const std::span<const int> y, const gbm_config &cfg) {
    if (x.rows() != y.size() || y.empty()) {
        throw training_error{ fmt::format("gradient boosting needs a non-empty training set with matching labels ({} rows, {} labels)", x.rows(), y.size()) };
    }
    if (!(cfg.shrinkage > 0.0 && cfg.shrinkage <= 1.0)) {
        throw training_error{ fmt::format("shrinkage must lie in (0, 1], got {}", cfg.shrinkage) };
    }
    std::size_t positives = 0;
    for (const int label : y) {
        if (label != 0 && label != 1) {
            throw training_error{ fmt::format("gradient boosting needs 0/1 labels, found {}", label) };
        }
        positives += static_cast<std::size_t>(label);
    }
    if (positives == 0 || positives == y.size()) {
        throw training_error{ "gradient boosting needs both classes in the training labels" };
    }

    const std::size_t n = y.size();
    const double mean = static_cast<double>(positives) / static_cast<double>(n);

    gbm_model model;
    model.initial_score = std::log(mean / (1.0 - mean));
    model.shrinkage = cfg.shrinkage;

    std::vector<double> scores(n, model.initial_score);
    std::vector<double> residuals(n);
    std::vector<double> hessians(n);
    model.training_loss.push_back(loss_from_scores(scores, y));

    for (std::size_t s = 0; s < cfg.n_stages; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(scores[i]);
            residuals[i] = static_cast<double>(y[i]) - p;
            hessians[i] = p * (1.0 - p);
        }
        decision_tree stage = fit_regression_tree(x, residuals, hessians, cfg.max_depth, cfg.min_samples);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] += cfg.shrinkage * stage.leaf_for(x.row(i)).value;
        }
        model.stages.push_back(std::move(stage));
        model.training_loss.push_back(loss_from_scores(scores, y));
    }
    return model;
}

double gbm_score(const gbm_model &model, const std::span<const int> x) {
    double total = 0.0;
    for (const decision_tree &stage : model.stages) {
        total += stage.leaf_for(x).value;
    }
    return model.initial_score + model.shrinkage * total;
}

double predict_proba_gbm(const gbm_model &model, const std::span<const int> x) {
    return sigmoid(gbm_score(model, x));
}

}  // namespace nyts::ml
