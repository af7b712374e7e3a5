#pragma once

#include "nyts/ingest/dataset.hpp"  // nyts::ingest::dataset
#include "nyts/ml/classifier.hpp"   // nyts::ml::model_spec

#include <cstddef>     // std::size_t
#include <cstdint>     // std::uint64_t
#include <functional>  // std::function
#include <span>        // std::span
#include <vector>      // std::vector

namespace nyts::metrics {

struct cv_config {
    std::size_t folds{ 5 };
    std::uint64_t seed{ 0 };
    bool stratified{ true };
};

/// Fold index (0..folds-1) of every position.
///
/// Stratified: each class is shuffled on its own and dealt round-robin, continuing the deal
/// from where the previous class stopped, so fold sizes differ by at most one. Throws
/// nyts::validation_error for folds < 2, folds > n, or (stratified) a class with fewer rows
/// than folds.
[[nodiscard]] std::vector<std::size_t> fold_assignment(std::span<const int> labels, const cv_config &cfg);

struct cv_result {
    std::vector<double> fold_scores;
    /// Mean held-out accuracy over the folds.
    double mean{ 0.0 };
};

/// Trains on `train` and returns predicted labels for every row of `validation`.
using fit_predict_fn = std::function<std::vector<int>(const ingest::dataset &train, const ingest::dataset &validation)>;

[[nodiscard]] cv_result cross_validate(const fit_predict_fn &fit_predict, const ingest::dataset &data, const cv_config &cfg = {});
[[nodiscard]] cv_result cross_validate(const ml::model_spec &spec, const ingest::dataset &data, const cv_config &cfg = {});

}  // namespace nyts::metrics
