#pragma once

#include "nyts/ingest/dataset.hpp"           // nyts::ingest::dataset
#include "nyts/matrix.hpp"                   // nyts::code_matrix
#include "nyts/ml/decision_tree.hpp"         // nyts::ml::decision_tree, nyts::ml::id3_config
#include "nyts/ml/gradient_boosting.hpp"     // nyts::ml::gbm_model, nyts::ml::gbm_config
#include "nyts/ml/linear_model.hpp"          // nyts::ml::weight_vector, nyts::ml::gd_config
#include "nyts/ml/naive_bayes.hpp"           // nyts::ml::gaussian_nb_model
#include "nyts/ml/random_forest.hpp"         // nyts::ml::forest_model, nyts::ml::forest_config

#include <array>        // std::array
#include <cstdint>      // std::uint64_t
#include <map>          // std::map
#include <span>         // std::span
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <variant>      // std::variant
#include <vector>       // std::vector

namespace nyts::ml {

enum class model_kind {
    linear,
    logistic,
    nb,
    tree,
    forest,
    gb,
};

inline constexpr std::array<model_kind, 6> all_model_kinds{ model_kind::linear, model_kind::logistic, model_kind::nb, model_kind::tree, model_kind::forest, model_kind::gb };

[[nodiscard]] std::string_view to_string(model_kind kind);
/// Accepts the names printed by to_string. Throws nyts::input_error otherwise.
[[nodiscard]] model_kind parse_model_kind(std::string_view name);
/// Human-readable algorithm name, e.g. "Gradient Boosting".
[[nodiscard]] std::string_view display_name(model_kind kind);

/// Least-squares fit of the 0/1 label, thresholded at 0.5.
struct linear_threshold_model {
    weight_vector weights;
    fit_report report;

    bool operator==(const linear_threshold_model &) const = default;
};

struct logistic_model {
    weight_vector weights;
    fit_report report;

    bool operator==(const logistic_model &) const = default;
};

using model_parameters = std::variant<linear_threshold_model, logistic_model, gaussian_nb_model, decision_tree, forest_model, gbm_model>;

struct model_metadata {
    std::vector<std::string> feature_names;
    /// Allowed codes per feature (0 included). Empty means any non-negative code is accepted.
    std::vector<std::vector<int>> feature_domains;
    /// Resolved hyperparameters, rendered as text.
    std::map<std::string, std::string> hyperparameters;
    std::uint64_t seed{ 0 };
    std::string catalog_version;
    /// Creation timestamp (ISO 8601 UTC) or "unspecified".
    std::string created{ "unspecified" };

    bool operator==(const model_metadata &) const = default;
};

struct classifier_model {
    model_parameters parameters;
    model_metadata metadata;

    [[nodiscard]] model_kind kind() const noexcept { return static_cast<model_kind>(parameters.index()); }
    [[nodiscard]] std::size_t arity() const noexcept { return metadata.feature_names.size(); }

    bool operator==(const classifier_model &) const = default;
};

struct prediction_result {
    double probability_yes{ 0.0 };
    int label{ 0 };

    bool operator==(const prediction_result &) const = default;
};

/// Throws nyts::validation_error when `x` has the wrong length or a code outside its
/// feature's domain (the message names the feature and the code).
void validate_input(const classifier_model &model, std::span<const int> x);

/// Probability of class 1 for an already validated input.
///
/// logistic and gb return sigmoid of their score, nb the normalised posterior. The others
/// have no native probability: linear clamps the regression output to [0, 1], tree returns the
/// positive fraction of the reached leaf, forest the fraction of trees voting 1.
[[nodiscard]] double probability_yes(const classifier_model &model, std::span<const int> x);

/// Validates and scores one input. label = 1 iff probability_yes > 0.5, so 0.5 maps to 0.
[[nodiscard]] prediction_result predict(const classifier_model &model, std::span<const int> x);

/// Labels for every row of `x` (validated).
[[nodiscard]] std::vector<int> predict_labels(const classifier_model &model, const code_matrix &x);

/// Everything needed to train one model kind.
struct model_spec {
    model_kind kind{ model_kind::gb };
    gd_config gd{};
    /// linear / logistic: fit on z-scored columns, then fold the scaling back into raw-code weights.
    bool standardize{ true };
    id3_config tree{ 10, 2 };
    forest_config forest{};
    gbm_config gbm{};
    std::uint64_t seed{ 0 };
};

/// Resolved hyperparameters of `spec` for its kind, as stored in model metadata.
[[nodiscard]] std::map<std::string, std::string> hyperparameters(const model_spec &spec);

/// Fits `spec.kind` on `data` and fills feature names, hyperparameters and seed.
/// Throws nyts::training_error.
[[nodiscard]] classifier_model train_model(const ingest::dataset &data, const model_spec &spec);

/// Integer codes as reals, for the continuous learners.
[[nodiscard]] real_matrix to_real(const code_matrix &x);

}  // namespace nyts::ml
