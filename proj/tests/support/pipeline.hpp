#pragma once

// Synthetic survey data run through the same steps as `nyts prepare`, and models over it.

#include "nyts/ingest/prepare.hpp"
#include "nyts/ingest/raw_table.hpp"
#include "nyts/ingest/synthetic.hpp"
#include "nyts/ml/classifier.hpp"
#include "nyts/schema/catalog.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace fixtures {

inline nyts::ingest::dataset prepared_synthetic(const nyts::schema::question_catalog &catalog, const std::size_t rows, const std::uint64_t seed, const std::string &signal = "Q6:1.5,Q27:-2,Q30:1;intercept=-1") {
    using namespace nyts::ingest;
    const raw_table raw = impute_nulls(generate_synthetic(rows, catalog, parse_signal(signal), seed));
    return derive_target(filter_never_smokers(raw, catalog).table, catalog).data;
}

/// A prepared cohort of exactly `size` respondents: draws enough synthetic rows that `size`
/// survive the cohort filter and target derivation, then keeps the first `size`.
inline nyts::ingest::dataset synthetic_cohort(const nyts::schema::question_catalog &catalog, const std::size_t size, const std::uint64_t seed, const std::string &signal) {
    std::size_t rows = size;
    nyts::ingest::dataset data = prepared_synthetic(catalog, rows, seed, signal);
    while (data.size() < size) {
        rows *= 2;
        data = prepared_synthetic(catalog, rows, seed, signal);
    }
    std::vector<std::size_t> first(size);
    std::iota(first.begin(), first.end(), std::size_t{ 0 });
    return data.subset(first);
}

/// Attaches the catalog's domains and version, as `nyts train --catalog` does.
inline nyts::ml::classifier_model catalog_model(const nyts::schema::question_catalog &catalog, const nyts::ingest::dataset &data, const nyts::ml::model_spec &spec) {
    nyts::ml::classifier_model model = nyts::ml::train_model(data, spec);
    for (const nyts::schema::feature_column &col : nyts::schema::feature_layout(catalog)) {
        model.metadata.feature_domains.push_back(col.allowed);
    }
    model.metadata.catalog_version = catalog.version();
    return model;
}

}  // namespace fixtures
