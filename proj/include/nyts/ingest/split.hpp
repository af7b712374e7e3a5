#pragma once

#include "nyts/ingest/dataset.hpp"  // nyts::ingest::dataset

#include <cstddef>  // std::size_t
#include <cstdint>  // std::uint64_t
#include <span>     // std::span
#include <utility>  // std::pair
#include <vector>   // std::vector

namespace nyts::ingest {

struct split_spec {
    double test_fraction{ 0.2 };
    std::uint64_t seed{ 0 };
    bool stratified{ true };
};

struct split_indices {
    std::vector<std::size_t> train;  ///< ascending
    std::vector<std::size_t> test;   ///< ascending
};

/// Seeded partition of positions 0..n-1 with |test| = round(test_fraction * n).
/// Stratified: each class contributes round-to-total shares (largest remainder), so
/// per-class proportions hold to within one row. Throws nyts::input_error on an empty
/// input, a fraction outside (0,1), or (stratified) a class with fewer than two rows.
[[nodiscard]] split_indices split_positions(std::span<const int> labels, const split_spec &spec);

[[nodiscard]] std::pair<dataset, dataset> train_test_split(const dataset &ds, const split_spec &spec);

}  // namespace nyts::ingest
