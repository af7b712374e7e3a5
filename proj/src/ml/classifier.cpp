#include "nyts/ml/classifier.hpp"

#include "nyts/exceptions.hpp"  // nyts::input_error, nyts::training_error, nyts::validation_error

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::binary_search, std::clamp, std::find
#include <cmath>      // std::sqrt
#include <type_traits>  // std::is_same_v, std::decay_t

namespace nyts::ml {

namespace {

struct kind_names {
    model_kind kind;
    std::string_view name;
    std::string_view display;
};

constexpr std::array<kind_names, 6> names{ {
    { model_kind::linear, "linear", "Linear Regression" },
    { model_kind::logistic, "logistic", "Logistic Regression" },
    { model_kind::nb, "nb", "Gaussian NB" },
    { model_kind::tree, "tree", "Decision Tree" },
    { model_kind::forest, "forest", "Random Forest" },
    { model_kind::gb, "gb", "Gradient Boosting" },
} };

}  // namespace

std::string_view to_string(const model_kind kind) {
    return names[static_cast<std::size_t>(kind)].name;
}

std::string_view display_name(const model_kind kind) {
    return names[static_cast<std::size_t>(kind)].display;
}

model_kind parse_model_kind(const std::string_view name) {
    for (const kind_names &entry : names) {
        if (entry.name == name) {
            return entry.kind;
        }
    }
    throw input_error{ fmt::format("unknown model kind '{}' (expected linear, logistic, nb, tree, forest or gb)", name) };
}

real_matrix to_real(const code_matrix &x) {
    return x.cast<double>();
}

void validate_input(const classifier_model &model, const std::span<const int> x) {
    const model_metadata &meta = model.metadata;
    if (x.size() != meta.feature_names.size()) {
        throw validation_error{ fmt::format("model expects {} features, got {}", meta.feature_names.size(), x.size()) };
    }
    const bool has_domains = !meta.feature_domains.empty();
    for (std::size_t j = 0; j < x.size(); ++j) {
        const bool ok = has_domains ? std::find(meta.feature_domains[j].begin(), meta.feature_domains[j].end(), x[j]) != meta.feature_domains[j].end() : x[j] >= 0;
        if (!ok) {
            throw validation_error{ fmt::format("code {} is outside the domain of feature {}", x[j], meta.feature_names[j]) };
        }
    }
}

double probability_yes(const classifier_model &model, const std::span<const int> x) {
    std::vector<double> real_x;
    const auto reals = [&]() -> std::span<const double> {
        real_x.assign(x.begin(), x.end());
        return real_x;
    };
    return std::visit(
        [&](const auto &params) -> double {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, linear_threshold_model>) {
                return std::clamp(params.weights.dot(reals()), 0.0, 1.0);
            } else if constexpr (std::is_same_v<T, logistic_model>) {
                return predict_proba_logistic(params.weights, reals());
            } else if constexpr (std::is_same_v<T, gaussian_nb_model>) {
                const std::vector<double> posterior = predict_proba_nb(params, reals());
                const auto it = std::find(params.classes.begin(), params.classes.end(), 1);
                return it == params.classes.end() ? 0.0 : posterior[static_cast<std::size_t>(it - params.classes.begin())];
            } else if constexpr (std::is_same_v<T, decision_tree>) {
                return params.leaf_for(x).value;
            } else if constexpr (std::is_same_v<T, forest_model>) {
                return forest_vote_fraction(params, x);
            } else {
                return predict_proba_gbm(params, x);
            }
        },
        model.parameters);
}

prediction_result predict(const classifier_model &model, const std::span<const int> x) {
    validate_input(model, x);
    const double p = probability_yes(model, x);
    return { p, p > 0.5 ? 1 : 0 };
}

std::vector<int> predict_labels(const classifier_model &model, const code_matrix &x) {
    std::vector<int> labels;
    labels.reserve(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        labels.push_back(predict(model, x.row(i)).label);
    }
    return labels;
}

std::map<std::string, std::string> hyperparameters(const model_spec &spec) {
    std::map<std::string, std::string> hp;
    switch (spec.kind) {
        case model_kind::linear:
        case model_kind::logistic:
            hp["learning_rate"] = fmt::format("{}", spec.gd.learning_rate);
            hp["tolerance"] = fmt::format("{}", spec.gd.tolerance);
            hp["max_iters"] = fmt::format("{}", spec.gd.max_iters);
            hp["l2"] = fmt::format("{}", spec.gd.l2);
            hp["standardize"] = spec.standardize ? "true" : "false";
            if (spec.kind == model_kind::logistic) {
                hp["weight_norm_cap"] = fmt::format("{}", spec.gd.weight_norm_cap);
            }
            break;
        case model_kind::nb:
            hp["variance_floor"] = "1e-9*max(max column variance, 1e-9)";
            break;
        case model_kind::tree:
            hp["max_depth"] = fmt::format("{}", spec.tree.max_depth);
            hp["min_samples"] = fmt::format("{}", spec.tree.min_samples);
            break;
        case model_kind::forest:
            hp["n_trees"] = fmt::format("{}", spec.forest.n_trees);
            hp["max_features"] = fmt::format("{}", spec.forest.max_features);
            hp["bootstrap"] = spec.forest.bootstrap ? "true" : "false";
            hp["max_depth"] = fmt::format("{}", spec.forest.tree.max_depth);
            hp["min_samples"] = fmt::format("{}", spec.forest.tree.min_samples);
            break;
        case model_kind::gb:
            hp["n_stages"] = fmt::format("{}", spec.gbm.n_stages);
            hp["shrinkage"] = fmt::format("{}", spec.gbm.shrinkage);
            hp["max_depth"] = fmt::format("{}", spec.gbm.max_depth);
            hp["min_samples"] = fmt::format("{}", spec.gbm.min_samples);
            break;
    }
    return hp;
}

namespace {

struct column_scaling {
    std::vector<double> mean;
    std::vector<double> scale;
};

column_scaling standardize_in_place(real_matrix &x) {
    const std::size_t n = x.rows();
    column_scaling s{ std::vector<double>(x.cols(), 0.0), std::vector<double>(x.cols(), 1.0) };
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += x(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            var += (x(i, j) - mean) * (x(i, j) - mean);
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        s.mean[j] = mean;
        s.scale[j] = sd > 0.0 ? sd : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            x(i, j) = (x(i, j) - mean) / s.scale[j];
        }
    }
    return s;
}

// w_z^T z = w_z^T (x - mean) / scale, rewritten as raw-space weights
weight_vector fold_back(const weight_vector &w, const column_scaling &s) {
    weight_vector raw = w;
    for (std::size_t j = 0; j < s.mean.size(); ++j) {
        raw.values[j + 1] = w.values[j + 1] / s.scale[j];
        raw.values[0] -= raw.values[j + 1] * s.mean[j];
    }
    return raw;
}

template <typename Fit>
linear_fit fit_scaled(const code_matrix &codes, const bool standardize, Fit fit) {
    real_matrix x = to_real(codes);
    if (!standardize || x.rows() == 0) {
        return fit(x);
    }
    const column_scaling s = standardize_in_place(x);
    linear_fit result = fit(x);
    result.weights = fold_back(result.weights, s);
    return result;
}

}  // namespace

classifier_model train_model(const ingest::dataset &data, const model_spec &spec) {
    if (data.size() == 0) {
        throw training_error{ "cannot train on an empty dataset" };
    }
    const std::span<const int> y{ data.labels };
    classifier_model model;
    switch (spec.kind) {
        case model_kind::linear: {
            const std::vector<double> targets(y.begin(), y.end());
            const linear_fit fit = fit_scaled(data.features, spec.standardize, [&](const real_matrix &x) { return fit_linear_regression(x, targets, spec.gd); });
            model.parameters = linear_threshold_model{ fit.weights, fit.report };
            break;
        }
        case model_kind::logistic: {
            const linear_fit fit = fit_scaled(data.features, spec.standardize, [&](const real_matrix &x) { return fit_logistic(x, y, spec.gd); });
            model.parameters = logistic_model{ fit.weights, fit.report };
            break;
        }
        case model_kind::nb:
            model.parameters = fit_gaussian_nb(to_real(data.features), y);
            break;
        case model_kind::tree:
            model.parameters = fit_decision_tree(data.features, y, spec.tree);
            break;
        case model_kind::forest: {
            forest_config cfg = spec.forest;
            cfg.seed = spec.seed;
            model.parameters = fit_random_forest(data.features, y, cfg);
            break;
        }
        case model_kind::gb: {
            gbm_config cfg = spec.gbm;
            cfg.seed = spec.seed;
            model.parameters = fit_gbm(data.features, y, cfg);
            break;
        }
    }
    model.metadata.feature_names = data.feature_names;
    model.metadata.hyperparameters = hyperparameters(spec);
    model.metadata.seed = spec.seed;
    return model;
}

}  // namespace nyts::ml
