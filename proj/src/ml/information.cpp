#include "nyts/ml/information.hpp"

#include <cmath>  // std::log2
#include <map>    // std::map
#include <vector> // std::vector

namespace nyts::ml {

double information(const std::size_t positive, const std::size_t negative) {
    const double total = static_cast<double>(positive + negative);
    if (total == 0.0) {
        return 0.0;
    }
    const auto term = [total](const std::size_t count) {
        if (count == 0) {
            return 0.0;
        }
        const double p = static_cast<double>(count) / total;
        return -p * std::log2(p);
    };
    return term(positive) + term(negative);
}

double expected_information(const std::span<const class_counts> partition) {
    std::size_t total = 0;
    for (const class_counts &cell : partition) {
        total += cell.total();
    }
    if (total == 0) {
        return 0.0;
    }
    double e = 0.0;
    for (const class_counts &cell : partition) {
        e += static_cast<double>(cell.total()) / static_cast<double>(total) * information(cell.positive, cell.negative);
    }
    return e;
}

double information_gain(const code_matrix &x, const std::span<const int> y, const std::span<const std::size_t> rows, const std::size_t feature) {
    std::map<int, class_counts> cells;
    class_counts node;
    for (const std::size_t r : rows) {
        class_counts &cell = cells[x(r, feature)];
        if (y[r] == 1) {
            ++cell.positive;
            ++node.positive;
        } else {
            ++cell.negative;
            ++node.negative;
        }
    }
    std::vector<class_counts> partition;
    partition.reserve(cells.size());
    for (const auto &[code, cell] : cells) {
        partition.push_back(cell);
    }
    return information(node.positive, node.negative) - expected_information(partition);
}

}  // namespace nyts::ml
