#pragma once

#include "nyts/matrix.hpp"              // nyts::code_matrix
#include "nyts/ml/decision_tree.hpp"    // nyts::ml::decision_tree, nyts::ml::id3_config

#include <cstddef>  // std::size_t
#include <cstdint>  // std::uint64_t
#include <span>     // std::span
#include <vector>   // std::vector

namespace nyts::ml {

struct forest_config {
    std::size_t n_trees{ 100 };
    /// Features drawn (without replacement) per tree; 0 = ceil(sqrt(d)).
    std::size_t max_features{ 0 };
    bool bootstrap{ true };
    std::uint64_t seed{ 0 };
    id3_config tree{};

    bool operator==(const forest_config &) const = default;
};

struct forest_model {
    std::vector<decision_tree> trees;
    /// Seed each tree's bootstrap and feature draw came from.
    std::vector<std::uint64_t> tree_seeds;
    /// Sorted feature indices each tree was allowed to use.
    std::vector<std::vector<std::size_t>> tree_features;
    std::size_t max_features{ 0 };

    bool operator==(const forest_model &) const = default;
};

/// Each tree is ID3 on n bootstrap draws (or all rows) restricted to its own feature draw.
/// Deterministic per seed: tree t uses derive_seed(seed, t). Throws nyts::training_error
/// when n_trees is 0 or max_features exceeds the feature count.
[[nodiscard]] forest_model fit_random_forest(const code_matrix &x, std::span<const int> y, const forest_config &cfg = {});

/// Most frequent label; ties go to the smallest label. Throws nyts::validation_error on no votes.
[[nodiscard]] int vote_mode(std::span<const int> votes);

/// Per-tree leaf labels for one input.
[[nodiscard]] std::vector<int> forest_votes(const forest_model &model, std::span<const int> x);

/// Mode of the tree votes, ties to class 0.
[[nodiscard]] int predict_forest(const forest_model &model, std::span<const int> x);

/// Fraction of trees voting 1.
[[nodiscard]] double forest_vote_fraction(const forest_model &model, std::span<const int> x);

}  // namespace nyts::ml
