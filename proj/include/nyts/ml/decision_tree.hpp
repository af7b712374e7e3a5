#pragma once

#include "nyts/matrix.hpp"  // nyts::code_matrix

#include <cstddef>  // std::size_t
#include <cstdint>  // std::uint32_t
#include <limits>   // std::numeric_limits
#include <span>     // std::span
#include <utility>  // std::pair
#include <vector>   // std::vector

namespace nyts::ml {

inline constexpr std::uint32_t no_node = std::numeric_limits<std::uint32_t>::max();

/// Node of a multiway categorical tree. Internal nodes branch on every answer code observed
/// at training time and send unseen codes to `fallback`, a leaf built from the node's own rows.
struct tree_node {
    bool is_leaf{ true };
    std::uint32_t feature{ 0 };
    /// (code, child index), ascending by code.
    std::vector<std::pair<int, std::uint32_t>> children;
    std::uint32_t fallback{ no_node };
    /// Leaf class (majority, ties to 0); unused by regression trees.
    int label{ 0 };
    /// Leaf output: positive-class fraction for classification trees, Newton step for boosting trees.
    double value{ 0.0 };
    /// Internal nodes: information gain (ID3) or squared-error reduction (regression).
    double score{ 0.0 };
    std::uint32_t samples{ 0 };

    bool operator==(const tree_node &) const = default;
};

/// Flat tree; nodes[0] is the root.
struct decision_tree {
    std::vector<tree_node> nodes;

    [[nodiscard]] const tree_node &leaf_for(std::span<const int> x) const;
    [[nodiscard]] std::size_t depth() const;
    [[nodiscard]] std::size_t leaf_count() const;
    /// Largest feature index referenced + 1 (0 for a single leaf).
    [[nodiscard]] std::size_t required_arity() const;

    bool operator==(const decision_tree &) const = default;
};

struct id3_config {
    /// 0 = unlimited.
    std::size_t max_depth{ 0 };
    /// Nodes with fewer rows become leaves.
    std::size_t min_samples{ 2 };

    bool operator==(const id3_config &) const = default;
};

/// Tolerance under which two split scores count as tied (ties go to the lowest feature index).
inline constexpr double split_tie_tolerance = 1e-12;

/// ID3 on categorical codes: each node takes the unused feature of maximal information gain
/// among those with at least two observed codes, and splits on every observed code.
/// Stops on purity, exhausted features, max_depth, or min_samples. Labels must be 0/1.
/// Throws nyts::training_error on empty input.
[[nodiscard]] decision_tree fit_decision_tree(const code_matrix &x, std::span<const int> y, const id3_config &cfg = {});

/// ID3 over a row multiset (duplicates allowed, as in bootstrap samples) and a candidate feature set.
[[nodiscard]] decision_tree fit_id3(const code_matrix &x, std::span<const int> y, std::span<const std::size_t> rows, std::span<const std::size_t> features, const id3_config &cfg);

}  // namespace nyts::ml
