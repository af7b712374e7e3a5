#include "nyts/ml/softmax.hpp"

#include "nyts/exceptions.hpp"  // nyts::validation_error

#include <algorithm>  // std::max_element
#include <cmath>      // std::exp, std::log
#include <limits>     // std::numeric_limits

namespace nyts::ml {

std::vector<double> softmax(const std::span<const double> logits) {
    if (logits.empty()) {
        return {};
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        out[k] = std::exp(logits[k] - top);
        total += out[k];
    }
    for (double &p : out) {
        p /= total;
    }
    return out;
}

std::vector<double> softmax_proba(const std::span<const weight_vector> class_weights, const std::span<const double> x) {
    if (class_weights.size() < 2) {
        throw validation_error{ "softmax needs at least two classes" };
    }
    std::vector<double> logits;
    logits.reserve(class_weights.size());
    for (const weight_vector &w : class_weights) {
        if (w.feature_count() != x.size()) {
            throw validation_error{ "softmax weight vector does not match the input arity" };
        }
        logits.push_back(w.dot(x));
    }
    return softmax(logits);
}

double log_sum_exp(const std::span<const double> values) {
    if (values.empty()) {
        return -std::numeric_limits<double>::infinity();
    }
    const double top = *std::max_element(values.begin(), values.end());
    if (top == -std::numeric_limits<double>::infinity()) {
        return top;
    }
    double total = 0.0;
    for (const double v : values) {
        total += std::exp(v - top);
    }
    return top + std::log(total);
}

}  // namespace nyts::ml
