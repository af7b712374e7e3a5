#pragma once

#include "nyts/ml/linear_model.hpp"  // nyts::ml::weight_vector

#include <span>    // std::span
#include <vector>  // std::vector

namespace nyts::ml {

/// exp(z_k) / sum_i exp(z_i), evaluated after subtracting max(z).
[[nodiscard]] std::vector<double> softmax(std::span<const double> logits);

/// Multi-class logistic output for one weight vector per class. Throws nyts::validation_error for fewer than two classes.
[[nodiscard]] std::vector<double> softmax_proba(std::span<const weight_vector> class_weights, std::span<const double> x);

/// Log of sum_i exp(v_i), stable for large magnitudes.
[[nodiscard]] double log_sum_exp(std::span<const double> values);

}  // namespace nyts::ml
