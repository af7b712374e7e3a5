#include "nyts/exceptions.hpp"
#include "nyts/ml/decision_tree.hpp"
#include "nyts/ml/gradient_boosting.hpp"
#include "nyts/ml/random_forest.hpp"

#include "oracles.hpp"
#include "tree_oracle.hpp"

#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace nyts;
using namespace nyts::ml;

namespace {

// Every code vector over {0..max_code}^d, which covers unseen codes as well.
std::vector<std::vector<int>> all_inputs(const std::size_t d, const int max_code) {
    std::vector<std::vector<int>> out{ {} };
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<std::vector<int>> next;
        for (const auto &prefix : out) {
            for (int c = 0; c <= max_code; ++c) {
                next.push_back(prefix);
                next.back().push_back(c);
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<int> noisy_labels(std::mt19937_64 &gen, const oracle::rows_t &rows) {
    std::vector<int> y;
    for (const auto &r : rows) {
        const double score = static_cast<double>(r[0]) - static_cast<double>(r.back()) + oracle::uniform(gen, -1.5, 1.5);
        y.push_back(score > 0.0 ? 1 : 0);
    }
    return y;
}

}  // namespace

TEST_SUITE("vote aggregation") {
    TEST_CASE("matches the mode oracle") {
        std::mt19937_64 gen{ 1000 };
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 1 + gen() % 101;
            const auto votes = oracle::random_labels(gen, n, trial % 2 == 0 ? 2 : 4);
            CHECK(vote_mode(votes) == oracle::mode(votes));
        }
    }

    TEST_CASE("ties go to the smaller label") {
        CHECK(vote_mode(std::vector<int>{ 1, 0 }) == 0);
        CHECK(vote_mode(std::vector<int>{ 1, 1, 0, 0 }) == 0);
        CHECK(vote_mode(std::vector<int>{ 1, 1, 0 }) == 1);
        CHECK_THROWS_AS(static_cast<void>(vote_mode(std::vector<int>{})), nyts::validation_error);
    }
}

TEST_SUITE("random forest") {
    TEST_CASE("a forest of one full tree is the plain tree") {
        std::mt19937_64 gen{ 61 };
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t d = 1 + gen() % 4;
            const auto rows = oracle::random_codes(gen, 10 + gen() % 50, d, 3);
            const auto y = oracle::random_labels(gen, rows.size(), 2);
            const code_matrix x = oracle::to_matrix(rows);
            const id3_config tree_cfg{ gen() % 3, 2 };
            const decision_tree plain = fit_decision_tree(x, y, tree_cfg);
            const forest_model forest = fit_random_forest(x, y, { 1, d, false, gen(), tree_cfg });
            CHECK(forest.trees.front() == plain);
            for (const auto &input : all_inputs(d, 4)) {
                CHECK(predict_forest(forest, input) == plain.leaf_for(input).label);
            }
        }
    }

    TEST_CASE("predictions are the mode of the tree votes") {
        std::mt19937_64 gen{ 62 };
        const auto rows = oracle::random_codes(gen, 200, 6, 3);
        const auto y = noisy_labels(gen, rows);
        const forest_model forest = fit_random_forest(oracle::to_matrix(rows), y, { 25, 2, true, 9, {} });
        CHECK(forest.trees.size() == 25);
        for (const auto &features : forest.tree_features) {
            CHECK(features.size() == 2);
            CHECK(std::is_sorted(features.begin(), features.end()));
        }
        for (const auto &input : oracle::random_codes(gen, 300, 6, 4)) {
            const std::vector<int> votes = forest_votes(forest, input);
            CHECK(predict_forest(forest, input) == oracle::mode(votes));
            CHECK(forest_vote_fraction(forest, input) == doctest::Approx(static_cast<double>(std::count(votes.begin(), votes.end(), 1)) / 25.0));
        }
    }

    TEST_CASE("trees only use their own feature draw") {
        std::mt19937_64 gen{ 63 };
        const auto rows = oracle::random_codes(gen, 150, 9, 2);
        const auto y = noisy_labels(gen, rows);
        const forest_model forest = fit_random_forest(oracle::to_matrix(rows), y, { 10, 0, true, 3, {} });
        CHECK(forest.max_features == 3);
        for (std::size_t t = 0; t < forest.trees.size(); ++t) {
            for (const tree_node &node : forest.trees[t].nodes) {
                if (!node.is_leaf) {
                    const auto &allowed = forest.tree_features[t];
                    CHECK(std::find(allowed.begin(), allowed.end(), node.feature) != allowed.end());
                }
            }
        }
    }

    TEST_CASE("deterministic per seed") {
        std::mt19937_64 gen{ 64 };
        const auto rows = oracle::random_codes(gen, 100, 5, 3);
        const auto y = noisy_labels(gen, rows);
        const code_matrix x = oracle::to_matrix(rows);
        CHECK(fit_random_forest(x, y, { 8, 0, true, 42, {} }) == fit_random_forest(x, y, { 8, 0, true, 42, {} }));
        CHECK_FALSE(fit_random_forest(x, y, { 8, 0, true, 42, {} }) == fit_random_forest(x, y, { 8, 0, true, 43, {} }));
    }

    TEST_CASE("configuration errors") {
        const code_matrix x = oracle::to_matrix({ { 1, 2 }, { 2, 1 } });
        const std::vector<int> y{ 0, 1 };
        CHECK_THROWS_AS(static_cast<void>(fit_random_forest(x, y, { 0, 0, true, 0, {} })), nyts::training_error);
        CHECK_THROWS_AS(static_cast<void>(fit_random_forest(x, y, { 3, 3, true, 0, {} })), nyts::training_error);
    }
}

TEST_SUITE("gradient boosting") {
    TEST_CASE("log loss") {
        CHECK(mean_log_loss(std::vector<double>{ 0.5, 0.5 }, std::vector<int>{ 0, 1 }) == doctest::Approx(std::log(2.0)));
        CHECK(mean_log_loss(std::vector<double>{ 0.9 }, std::vector<int>{ 1 }) == doctest::Approx(-std::log(0.9)));
    }

    TEST_CASE("zero stages predict the base rate") {
        const code_matrix x = oracle::to_matrix({ { 1 }, { 2 }, { 1 }, { 2 } });
        const gbm_model balanced = fit_gbm(x, std::vector<int>{ 0, 1, 1, 0 }, { 0, 0.1, 3, 1, 0 });
        CHECK(balanced.stages.empty());
        CHECK(predict_proba_gbm(balanced, std::vector<int>{ 1 }) == doctest::Approx(0.5).epsilon(1e-15));
        const gbm_model skewed = fit_gbm(x, std::vector<int>{ 1, 1, 1, 0 }, { 0, 0.1, 3, 1, 0 });
        CHECK(predict_proba_gbm(skewed, std::vector<int>{ 2 }) == doctest::Approx(0.75));
        CHECK(skewed.training_loss.size() == 1);
    }

    TEST_CASE("training loss never increases") {
        std::mt19937_64 gen{ 71 };
        for (int trial = 0; trial < 20; ++trial) {
            const auto rows = oracle::random_codes(gen, 50 + gen() % 250, 2 + gen() % 5, 3);
            const auto y = noisy_labels(gen, rows);
            if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) {
                continue;
            }
            const gbm_model m = fit_gbm(oracle::to_matrix(rows), y, { 60, 0.1, 3, 2, 0 });
            REQUIRE(m.training_loss.size() == 61);
            for (std::size_t s = 1; s < m.training_loss.size(); ++s) {
                CHECK(m.training_loss[s] <= m.training_loss[s - 1] + 1e-9);
            }
        }
    }

    TEST_CASE("recorded loss matches the model's own predictions") {
        std::mt19937_64 gen{ 72 };
        const auto rows = oracle::random_codes(gen, 120, 4, 3);
        const auto y = noisy_labels(gen, rows);
        const gbm_model m = fit_gbm(oracle::to_matrix(rows), y, { 20, 0.1, 2, 5, 0 });
        std::vector<double> p;
        for (const auto &r : rows) {
            p.push_back(predict_proba_gbm(m, r));
        }
        CHECK(mean_log_loss(p, y) == doctest::Approx(m.training_loss.back()).epsilon(1e-12));
    }

    TEST_CASE("regression tree leaves are Newton steps") {
        const code_matrix x = oracle::to_matrix({ { 1 }, { 1 }, { 2 }, { 2 } });
        const std::vector<double> r{ 0.5, 0.3, -0.4, -0.2 };
        const std::vector<double> h{ 0.25, 0.25, 0.2, 0.2 };
        const decision_tree t = fit_regression_tree(x, r, h, 1, 2);
        CHECK(t.leaf_for(std::vector<int>{ 1 }).value == doctest::Approx(0.8 / 0.5));
        CHECK(t.leaf_for(std::vector<int>{ 2 }).value == doctest::Approx(-0.6 / 0.4));
        CHECK(t.leaf_for(std::vector<int>{ 7 }).value == doctest::Approx(0.2 / 0.9));
    }

    TEST_CASE("errors") {
        const code_matrix x = oracle::to_matrix({ { 1 }, { 2 } });
        CHECK_THROWS_AS(static_cast<void>(fit_gbm(x, std::vector<int>{ 1, 1 })), nyts::training_error);
        CHECK_THROWS_AS(static_cast<void>(fit_gbm(x, std::vector<int>{ 0, 2 })), nyts::training_error);
        CHECK_THROWS_AS(static_cast<void>(fit_gbm(x, std::vector<int>{ 0, 1 }, { 10, 0.0, 3, 2, 0 })), nyts::training_error);
        CHECK_THROWS_AS(static_cast<void>(fit_gbm(x, std::vector<int>{ 0, 1 }, { 10, 1.5, 3, 2, 0 })), nyts::training_error);
    }
}
