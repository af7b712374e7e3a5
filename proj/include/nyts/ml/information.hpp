#pragma once

#include "nyts/matrix.hpp"  // nyts::code_matrix

#include <cstddef>  // std::size_t
#include <span>     // std::span

namespace nyts::ml {

/// Positive / negative case counts of one partition cell.
struct class_counts {
    std::size_t positive{ 0 };
    std::size_t negative{ 0 };

    [[nodiscard]] std::size_t total() const noexcept { return positive + negative; }
};

/// Binary entropy in bits, I(p, n) = -p/(p+n) log2 p/(p+n) - n/(p+n) log2 n/(p+n); 0 log 0 = 0.
/// Returns 0 when p + n = 0.
[[nodiscard]] double information(std::size_t positive, std::size_t negative);

/// Size-weighted mean of the cells' information, E(A) = sum_i (p_i+n_i)/(p+n) I(p_i, n_i).
[[nodiscard]] double expected_information(std::span<const class_counts> partition);

/// gain(A) = I(p, n) - E(A), for the partition of `rows` by the codes of `feature`.
/// Labels are 0/1 with 1 counted as positive.
[[nodiscard]] double information_gain(const code_matrix &x, std::span<const int> y, std::span<const std::size_t> rows, std::size_t feature);

}  // namespace nyts::ml
