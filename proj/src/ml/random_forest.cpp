#include "nyts/ml/random_forest.hpp"

#include "nyts/exceptions.hpp"  // nyts::training_error, nyts::validation_error
#include "nyts/random.hpp"      // nyts::rng, nyts::derive_seed

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::sort
#include <cmath>      // std::ceil, std::sqrt
#include <map>        // std::map

namespace nyts::ml {

forest_model fit_random_forest(const code_matrix &x, const std::span<const int> y, const forest_config &cfg) {
    if (cfg.n_trees < 1) {
        throw training_error{ "a random forest needs at least one tree" };
    }
    if (x.rows() != y.size() || y.empty()) {
        throw training_error{ fmt::format("random forest needs a non-empty training set with matching labels ({} rows, {} labels)", x.rows(), y.size()) };
    }
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const std::size_t m = cfg.max_features == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))) : cfg.max_features;
    if (m > d) {
        throw training_error{ fmt::format("max_features {} exceeds the {} available features", m, d) };
    }

    forest_model model;
    model.max_features = m;
    model.trees.reserve(cfg.n_trees);
    std::vector<std::size_t> rows(n);
    std::vector<std::size_t> all_features(d);
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        const std::uint64_t seed = derive_seed(cfg.seed, t);
        rng gen{ seed };
        for (std::size_t i = 0; i < n; ++i) {
            rows[i] = cfg.bootstrap ? gen.uniform_index(n) : i;
        }
        // partial Fisher-Yates: the first m entries become the draw
        for (std::size_t j = 0; j < d; ++j) {
            all_features[j] = j;
        }
        for (std::size_t j = 0; j < m; ++j) {
            std::swap(all_features[j], all_features[j + gen.uniform_index(d - j)]);
        }
        std::vector<std::size_t> features(all_features.begin(), all_features.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(features.begin(), features.end());

        model.trees.push_back(fit_id3(x, y, rows, features, cfg.tree));
        model.tree_seeds.push_back(seed);
        model.tree_features.push_back(std::move(features));
    }
    return model;
}

int vote_mode(const std::span<const int> votes) {
    if (votes.empty()) {
        throw validation_error{ "no votes to aggregate" };
    }
    std::map<int, std::size_t> tally;
    for (const int v : votes) {
        ++tally[v];
    }
    int best = tally.begin()->first;
    std::size_t best_count = 0;
    for (const auto &[label, count] : tally) {
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

std::vector<int> forest_votes(const forest_model &model, const std::span<const int> x) {
    std::vector<int> votes;
    votes.reserve(model.trees.size());
    for (const decision_tree &t : model.trees) {
        votes.push_back(t.leaf_for(x).label);
    }
    return votes;
}

int predict_forest(const forest_model &model, const std::span<const int> x) {
    return vote_mode(forest_votes(model, x));
}

double forest_vote_fraction(const forest_model &model, const std::span<const int> x) {
    std::size_t yes = 0;
    for (const decision_tree &t : model.trees) {
        yes += t.leaf_for(x).label == 1 ? 1 : 0;
    }
    return static_cast<double>(yes) / static_cast<double>(model.trees.size());
}

}  // namespace nyts::ml
