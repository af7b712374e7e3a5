#include "nyts/metrics/cross_validation.hpp"

#include "nyts/exceptions.hpp"         // nyts::validation_error
#include "nyts/metrics/confusion.hpp"  // nyts::metrics::confusion, nyts::metrics::accuracy
#include "nyts/random.hpp"             // nyts::rng

#include "fmt/format.h"  // fmt::format

#include <map>  // std::map

namespace nyts::metrics {

std::vector<std::size_t> fold_assignment(const std::span<const int> labels, const cv_config &cfg) {
    const std::size_t n = labels.size();
    if (cfg.folds < 2) {
        throw validation_error{ fmt::format("cross-validation needs at least 2 folds, got {}", cfg.folds) };
    }
    if (cfg.folds > n) {
        throw validation_error{ fmt::format("{} folds requested for only {} rows", cfg.folds, n) };
    }
    std::map<int, std::vector<std::size_t>> groups;
    if (cfg.stratified) {
        for (std::size_t i = 0; i < n; ++i) {
            groups[labels[i]].push_back(i);
        }
        for (const auto &[label, members] : groups) {
            if (members.size() < cfg.folds) {
                throw validation_error{ fmt::format("class {} has {} rows, so some of the {} folds would lack it", label, members.size(), cfg.folds) };
            }
        }
    } else {
        std::vector<std::size_t> &all = groups[0];
        for (std::size_t i = 0; i < n; ++i) {
            all.push_back(i);
        }
    }

    rng gen{ cfg.seed };
    std::vector<std::size_t> fold(n, 0);
    std::size_t next = 0;
    for (auto &[label, members] : groups) {
        gen.shuffle(members);
        for (const std::size_t i : members) {
            fold[i] = next;
            next = (next + 1) % cfg.folds;
        }
    }
    return fold;
}

cv_result cross_validate(const fit_predict_fn &fit_predict, const ingest::dataset &data, const cv_config &cfg) {
    const std::vector<std::size_t> fold = fold_assignment(data.labels, cfg);
    cv_result result;
    for (std::size_t k = 0; k < cfg.folds; ++k) {
        std::vector<std::size_t> train_rows;
        std::vector<std::size_t> valid_rows;
        for (std::size_t i = 0; i < fold.size(); ++i) {
            (fold[i] == k ? valid_rows : train_rows).push_back(i);
        }
        const ingest::dataset train = data.subset(train_rows);
        const ingest::dataset valid = data.subset(valid_rows);
        const std::vector<int> predicted = fit_predict(train, valid);
        result.fold_scores.push_back(accuracy(confusion(valid.labels, predicted)));
    }
    double sum = 0.0;
    for (const double s : result.fold_scores) {
        sum += s;
    }
    result.mean = sum / static_cast<double>(result.fold_scores.size());
    return result;
}

cv_result cross_validate(const ml::model_spec &spec, const ingest::dataset &data, const cv_config &cfg) {
    return cross_validate(
        [&](const ingest::dataset &train, const ingest::dataset &valid) {
            const ml::classifier_model model = ml::train_model(train, spec);
            return ml::predict_labels(model, valid.features);
        },
        data, cfg);
}

}  // namespace nyts::metrics
