#include "nyts/exceptions.hpp"
#include "nyts/ml/naive_bayes.hpp"

#include "oracles.hpp"

#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

using namespace nyts;
using namespace nyts::ml;

namespace {

real_matrix column(const std::vector<double> &values) {
    real_matrix x{ values.size(), 1 };
    std::copy(values.begin(), values.end(), x.data().begin());
    return x;
}

}  // namespace

TEST_CASE("two-class density example") {
    // class 0: {1, 3} -> mean 2, variance 1; class 1: {4, 6, 4, 6} -> mean 5, variance 1
    const gaussian_nb_model m = fit_gaussian_nb(column({ 1, 3, 4, 6, 4, 6 }), std::vector<int>{ 0, 0, 1, 1, 1, 1 });
    CHECK(m.classes == std::vector<int>{ 0, 1 });
    CHECK(m.priors[0] == doctest::Approx(1.0 / 3.0));
    CHECK(m.means(0, 0) == 2.0);
    CHECK(m.means(1, 0) == 5.0);
    CHECK(m.variances(0, 0) == 1.0);
    CHECK(m.variances(1, 0) == 1.0);

    // P(1 | x=3) = (2/3) e^-2 / ((1/3) e^-0.5 + (2/3) e^-2) = 2 / (e^1.5 + 2)
    const std::vector<double> p = predict_proba_nb(m, std::vector<double>{ 3.0 });
    const double expected = 2.0 / (std::exp(1.5) + 2.0);
    CHECK(std::abs(p[1] - expected) <= 1e-9);
    CHECK(std::abs(p[0] - (1.0 - expected)) <= 1e-9);

    const std::vector<double> jll = joint_log_likelihood(m, std::vector<double>{ 3.0 });
    CHECK(jll[0] == doctest::Approx(std::log(1.0 / 3.0) - 0.5 - 0.5 * std::log(2.0 * std::numbers::pi)));
}

TEST_CASE("fit and posterior match a direct density computation") {
    std::mt19937_64 gen{ 31 };
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 20 + gen() % 40;
        const std::size_t d = 1 + gen() % 4;
        const int k = 2 + static_cast<int>(gen() % 3);
        real_matrix x{ n, d };
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(i % static_cast<std::size_t>(k));
            for (std::size_t j = 0; j < d; ++j) {
                x(i, j) = oracle::uniform(gen, -3.0, 3.0) + y[i];
            }
        }
        const gaussian_nb_model m = fit_gaussian_nb(x, y);

        std::map<int, std::vector<std::size_t>> members;
        for (std::size_t i = 0; i < n; ++i) {
            members[y[i]].push_back(i);
        }
        const std::vector<double> query{ oracle::uniform(gen, -3.0, 5.0), oracle::uniform(gen, -3.0, 5.0), oracle::uniform(gen, -3.0, 5.0), oracle::uniform(gen, -3.0, 5.0) };
        std::vector<double> joint;
        for (const auto &[c, rows] : members) {
            double prob = static_cast<double>(rows.size()) / static_cast<double>(n);
            for (std::size_t j = 0; j < d; ++j) {
                double mean = 0.0;
                for (const std::size_t r : rows) {
                    mean += x(r, j);
                }
                mean /= static_cast<double>(rows.size());
                double var = 0.0;
                for (const std::size_t r : rows) {
                    var += (x(r, j) - mean) * (x(r, j) - mean);
                }
                var /= static_cast<double>(rows.size());
                const std::size_t ci = static_cast<std::size_t>(c);
                CHECK(m.means(ci, j) == doctest::Approx(mean).epsilon(1e-12));
                CHECK(m.variances(ci, j) == doctest::Approx(var).epsilon(1e-12));
                prob *= oracle::normal_density(query[j], mean, var);
            }
            joint.push_back(prob);
        }
        const double total = std::accumulate(joint.begin(), joint.end(), 0.0);
        const std::vector<double> p = predict_proba_nb(m, std::span<const double>{ query.data(), d });
        for (std::size_t c = 0; c < joint.size(); ++c) {
            CHECK(std::abs(p[c] - joint[c] / total) <= 1e-9);
        }
    }
}

TEST_CASE("posteriors sum to one on random queries") {
    std::mt19937_64 gen{ 8 };
    real_matrix x{ 60, 3 };
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        y[i] = static_cast<int>(i % 3);
        for (std::size_t j = 0; j < 3; ++j) {
            x(i, j) = oracle::uniform(gen, 0.0, 4.0) * (1.0 + y[i]);
        }
    }
    const gaussian_nb_model m = fit_gaussian_nb(x, y);
    for (int q = 0; q < 1000; ++q) {
        const std::vector<double> query{ oracle::uniform(gen, -50.0, 50.0), oracle::uniform(gen, -50.0, 50.0), oracle::uniform(gen, -50.0, 50.0) };
        const std::vector<double> p = predict_proba_nb(m, query);
        CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
        for (const double v : p) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("constant features stay finite through the variance floor") {
    const gaussian_nb_model m = fit_gaussian_nb(column({ 2, 2, 2, 2 }), std::vector<int>{ 0, 0, 1, 1 });
    CHECK(m.variances(0, 0) >= m.variance_floor);
    CHECK(m.variance_floor > 0.0);
    const std::vector<double> p = predict_proba_nb(m, std::vector<double>{ 5.0 });
    CHECK(std::isfinite(p[0]));
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
}

TEST_CASE("bad input") {
    CHECK_THROWS_AS(static_cast<void>(fit_gaussian_nb(real_matrix{}, std::vector<int>{})), nyts::training_error);
    CHECK_THROWS_AS(static_cast<void>(fit_gaussian_nb(column({ 1, 2 }), std::vector<int>{ 0 })), nyts::training_error);
}
