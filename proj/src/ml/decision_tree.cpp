#include "nyts/ml/decision_tree.hpp"

#include "nyts/exceptions.hpp"      // nyts::training_error
#include "nyts/ml/information.hpp"  // nyts::ml::information, nyts::ml::expected_information

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::lower_bound, std::max, std::sort
#include <optional>   // std::optional

namespace nyts::ml {

const tree_node &decision_tree::leaf_for(const std::span<const int> x) const {
    const tree_node *node = &nodes.front();
    while (!node->is_leaf) {
        const int code = x[node->feature];
        const auto it = std::lower_bound(node->children.begin(), node->children.end(), code, [](const auto &child, const int c) { return child.first < c; });
        const std::uint32_t next = (it != node->children.end() && it->first == code) ? it->second : node->fallback;
        node = &nodes[next];
    }
    return *node;
}

std::size_t decision_tree::depth() const {
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    // children always have larger indices than their parent
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        for (const auto &[code, child] : nodes[i].children) {
            level[child] = level[i] + 1;
        }
        if (nodes[i].fallback != no_node) {
            level[nodes[i].fallback] = level[i] + 1;
        }
    }
    return deepest;
}

std::size_t decision_tree::leaf_count() const {
    std::size_t n = 0;
    for (const tree_node &node : nodes) {
        n += node.is_leaf ? 1 : 0;
    }
    return n;
}

std::size_t decision_tree::required_arity() const {
    std::size_t arity = 0;
    for (const tree_node &node : nodes) {
        if (!node.is_leaf) {
            arity = std::max<std::size_t>(arity, node.feature + 1);
        }
    }
    return arity;
}

namespace {

class id3_builder {
  public:
    id3_builder(const code_matrix &x, const std::span<const int> y, const id3_config &cfg) :
        x_{ x },
        y_{ y },
        cfg_{ cfg } {
        int max_code = 0;
        for (const int v : x.data()) {
            if (v < 0) {
                throw training_error{ fmt::format("decision trees need non-negative codes, found {}", v) };
            }
            max_code = std::max(max_code, v);
        }
        counts_.resize(static_cast<std::size_t>(max_code) + 1);
    }

    decision_tree build(std::vector<std::size_t> rows, std::vector<std::size_t> features) {
        grow(std::move(rows), std::move(features), 0);
        return std::move(tree_);
    }

  private:
    std::uint32_t make_leaf(const std::span<const std::size_t> rows) {
        std::size_t positive = 0;
        for (const std::size_t r : rows) {
            positive += y_[r] == 1 ? 1 : 0;
        }
        tree_node leaf;
        leaf.samples = static_cast<std::uint32_t>(rows.size());
        leaf.label = 2 * positive > rows.size() ? 1 : 0;
        leaf.value = rows.empty() ? 0.0 : static_cast<double>(positive) / static_cast<double>(rows.size());
        tree_.nodes.push_back(std::move(leaf));
        return static_cast<std::uint32_t>(tree_.nodes.size() - 1);
    }

    // Gain of splitting `rows` on `feature`, or nullopt when fewer than two codes occur.
    std::optional<double> gain(const std::span<const std::size_t> rows, const std::size_t feature, const class_counts node) {
        touched_.clear();
        for (const std::size_t r : rows) {
            const auto code = static_cast<std::size_t>(x_(r, feature));
            class_counts &cell = counts_[code];
            if (cell.total() == 0) {
                touched_.push_back(code);
            }
            if (y_[r] == 1) {
                ++cell.positive;
            } else {
                ++cell.negative;
            }
        }
        partition_.clear();
        for (const std::size_t code : touched_) {
            partition_.push_back(counts_[code]);
            counts_[code] = {};
        }
        if (partition_.size() < 2) {
            return std::nullopt;
        }
        return information(node.positive, node.negative) - expected_information(partition_);
    }

    std::uint32_t grow(std::vector<std::size_t> rows, std::vector<std::size_t> features, const std::size_t depth) {
        class_counts node;
        for (const std::size_t r : rows) {
            (y_[r] == 1 ? node.positive : node.negative) += 1;
        }
        const bool pure = node.positive == 0 || node.negative == 0;
        const bool depth_capped = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
        if (pure || depth_capped || rows.size() < cfg_.min_samples || features.empty()) {
            return make_leaf(rows);
        }

        std::optional<std::size_t> best;
        double best_gain = 0.0;
        for (const std::size_t f : features) {
            const std::optional<double> g = gain(rows, f, node);
            if (g && (!best || *g > best_gain + split_tie_tolerance)) {
                best = f;
                best_gain = *g;
            }
        }
        if (!best) {
            return make_leaf(rows);
        }

        const std::size_t feature = *best;
        std::vector<std::pair<int, std::vector<std::size_t>>> groups;
        {
            std::vector<std::size_t> order = rows;
            std::stable_sort(order.begin(), order.end(), [&](const std::size_t a, const std::size_t b) { return x_(a, feature) < x_(b, feature); });
            for (const std::size_t r : order) {
                const int code = x_(r, feature);
                if (groups.empty() || groups.back().first != code) {
                    groups.emplace_back(code, std::vector<std::size_t>{});
                }
                groups.back().second.push_back(r);
            }
        }

        const auto index = static_cast<std::uint32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[index].is_leaf = false;
        tree_.nodes[index].feature = static_cast<std::uint32_t>(feature);
        tree_.nodes[index].score = best_gain;
        tree_.nodes[index].samples = static_cast<std::uint32_t>(rows.size());

        const std::uint32_t fallback = make_leaf(rows);
        tree_.nodes[index].fallback = fallback;

        std::vector<std::size_t> remaining;
        for (const std::size_t f : features) {
            if (f != feature) {
                remaining.push_back(f);
            }
        }
        rows.clear();
        rows.shrink_to_fit();
        std::vector<std::pair<int, std::uint32_t>> children;
        for (auto &[code, members] : groups) {
            children.emplace_back(code, grow(std::move(members), remaining, depth + 1));
        }
        tree_.nodes[index].children = std::move(children);
        return index;
    }

    const code_matrix &x_;
    std::span<const int> y_;
    id3_config cfg_;
    decision_tree tree_;
    std::vector<class_counts> counts_;
    std::vector<std::size_t> touched_;
    std::vector<class_counts> partition_;
};

}  // namespace

decision_tree fit_id3(const code_matrix &x, const std::span<const int> y, const std::span<const std::size_t> rows, const std::span<const std::size_t> features, const id3_config &cfg) {
    if (x.rows() != y.size()) {
        throw training_error{ fmt::format("feature matrix has {} rows but {} labels were given", x.rows(), y.size()) };
    }
    if (rows.empty()) {
        throw training_error{ "cannot fit a decision tree on an empty training set" };
    }
    for (const int label : y) {
        if (label != 0 && label != 1) {
            throw training_error{ fmt::format("decision trees need 0/1 labels, found {}", label) };
        }
    }
    std::vector<std::size_t> sorted_features(features.begin(), features.end());
    std::sort(sorted_features.begin(), sorted_features.end());
    id3_builder builder{ x, y, cfg };
    return builder.build({ rows.begin(), rows.end() }, std::move(sorted_features));
}

decision_tree fit_decision_tree(const code_matrix &x, const std::span<const int> y, const id3_config &cfg) {
    std::vector<std::size_t> rows(x.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i] = i;
    }
    std::vector<std::size_t> features(x.cols());
    for (std::size_t j = 0; j < features.size(); ++j) {
        features[j] = j;
    }
    return fit_id3(x, y, rows, features, cfg);
}

}  // namespace nyts::ml
