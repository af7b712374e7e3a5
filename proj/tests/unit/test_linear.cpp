#include "nyts/exceptions.hpp"
#include "nyts/ml/linear_model.hpp"
#include "nyts/ml/softmax.hpp"

#include "oracles.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace nyts;
using namespace nyts::ml;

namespace {

real_matrix random_matrix(std::mt19937_64 &gen, const std::size_t n, const std::size_t d, const double lo = -1.0, const double hi = 1.0) {
    real_matrix x{ n, d };
    for (double &v : x.data()) {
        v = oracle::uniform(gen, lo, hi);
    }
    return x;
}

std::vector<double> random_vector(std::mt19937_64 &gen, const std::size_t n, const double lo = -1.0, const double hi = 1.0) {
    std::vector<double> v(n);
    for (double &e : v) {
        e = oracle::uniform(gen, lo, hi);
    }
    return v;
}

std::vector<std::vector<double>> rows_of(const real_matrix &x) {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        out.emplace_back(x.row(r).begin(), x.row(r).end());
    }
    return out;
}

double inf_norm_relative(const std::vector<double> &analytic, const std::vector<double> &numeric) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < analytic.size(); ++j) {
        diff = std::max(diff, std::abs(analytic[j] - numeric[j]));
        scale = std::max(scale, std::abs(numeric[j]));
    }
    return diff / std::max(scale, 1e-12);
}

}  // namespace

TEST_SUITE("least squares") {
    TEST_CASE("rss of a perfect fit is zero") {
        real_matrix x{ 3, 1 };
        x(0, 0) = 1.0;
        x(1, 0) = 2.0;
        x(2, 0) = 3.0;
        const std::vector<double> y{ 3.0, 5.0, 7.0 };
        const weight_vector w{ { 1.0, 2.0 } };
        CHECK(rss(w, x, y) == doctest::Approx(0.0));
        const auto g = rss_gradient(w, x, y);
        CHECK(g[0] == doctest::Approx(0.0));
        CHECK(g[1] == doctest::Approx(0.0));
        CHECK(rss(weight_vector::zeros(1), x, y) == doctest::Approx(9.0 + 25.0 + 49.0));
    }

    TEST_CASE("analytic gradient matches central differences") {
        std::mt19937_64 gen{ 101 };
        for (int point = 0; point < 20; ++point) {
            const real_matrix x = random_matrix(gen, 30, 4);
            const std::vector<double> y = random_vector(gen, 30, -2.0, 2.0);
            const std::vector<double> w0 = random_vector(gen, 5);
            const auto f = [&](const std::vector<double> &w) { return rss(weight_vector{ w }, x, y); };
            CHECK(inf_norm_relative(rss_gradient(weight_vector{ w0 }, x, y), oracle::numeric_gradient(f, w0)) < 1e-4);
        }
    }

    TEST_CASE("gradient descent agrees with the normal equations") {
        std::mt19937_64 gen{ 7 };
        gd_config cfg;
        cfg.learning_rate = 0.1;
        cfg.tolerance = 1e-10;
        cfg.max_iters = 200'000;
        for (int problem = 0; problem < 20; ++problem) {
            const real_matrix x = random_matrix(gen, 50, 3);
            const std::vector<double> truth = random_vector(gen, 4, -3.0, 3.0);
            std::vector<double> y(50);
            for (std::size_t i = 0; i < 50; ++i) {
                y[i] = weight_vector{ truth }.dot(x.row(i)) + oracle::uniform(gen, -0.1, 0.1);
            }
            const linear_fit fit = fit_linear_regression(x, y, cfg);
            const std::vector<double> exact = oracle::normal_equations(rows_of(x), y);
            double worst = 0.0;
            for (std::size_t j = 0; j < exact.size(); ++j) {
                worst = std::max(worst, std::abs(fit.weights.values[j] - exact[j]));
            }
            CHECK(worst < 1e-3);
            CHECK(fit.report.converged);
        }
    }

    TEST_CASE("divergence is reported with the iteration") {
        std::mt19937_64 gen{ 3 };
        const real_matrix x = random_matrix(gen, 20, 2, -100.0, 100.0);
        const std::vector<double> y = random_vector(gen, 20);
        gd_config cfg;
        cfg.learning_rate = 10.0;
        CHECK_THROWS_AS(static_cast<void>(fit_linear_regression(x, y, cfg)), nyts::training_error);
    }

    TEST_CASE("configuration and shape errors") {
        gd_config bad;
        bad.learning_rate = 0.0;
        CHECK_THROWS_AS(bad.validate(), nyts::training_error);
        bad = {};
        bad.max_iters = 0;
        CHECK_THROWS_AS(bad.validate(), nyts::training_error);
        bad = {};
        bad.l2 = -1.0;
        CHECK_THROWS_AS(bad.validate(), nyts::training_error);
        const real_matrix x{ 3, 2 };
        const std::vector<double> y(2);
        CHECK_THROWS_AS(static_cast<void>(fit_linear_regression(x, y)), nyts::training_error);
    }
}

TEST_SUITE("logistic") {
    TEST_CASE("sigmoid") {
        CHECK(sigmoid(0.0) == 0.5);
        CHECK(sigmoid(800.0) == 1.0);
        CHECK(sigmoid(-800.0) >= 0.0);
        std::mt19937_64 gen{ 2 };
        for (int i = 0; i < 100; ++i) {
            const double z = oracle::uniform(gen, -30.0, 30.0);
            CHECK(sigmoid(z) + sigmoid(-z) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("analytic gradient matches central differences") {
        std::mt19937_64 gen{ 202 };
        for (int point = 0; point < 20; ++point) {
            const real_matrix x = random_matrix(gen, 40, 3, -2.0, 2.0);
            const std::vector<int> y = oracle::random_labels(gen, 40, 2);
            const std::vector<double> w0 = random_vector(gen, 4);
            const double l2 = point % 2 == 0 ? 0.0 : 0.5;
            const auto f = [&](const std::vector<double> &w) { return log_loss(weight_vector{ w }, x, y, l2); };
            CHECK(inf_norm_relative(log_loss_gradient(weight_vector{ w0 }, x, y, l2), oracle::numeric_gradient(f, w0)) < 1e-4);
        }
    }

    TEST_CASE("fit reaches a stationary point on overlapping classes") {
        std::mt19937_64 gen{ 9 };
        const real_matrix x = random_matrix(gen, 200, 2, -2.0, 2.0);
        std::vector<int> y(200);
        for (std::size_t i = 0; i < 200; ++i) {
            y[i] = oracle::uniform(gen, 0.0, 1.0) < 1.0 / (1.0 + std::exp(-(0.5 + x(i, 0) - x(i, 1)))) ? 1 : 0;
        }
        gd_config cfg;
        cfg.learning_rate = 0.5;
        cfg.tolerance = 1e-9;
        cfg.max_iters = 100'000;
        const linear_fit fit = fit_logistic(x, y, cfg);
        CHECK(fit.report.converged);
        CHECK_FALSE(fit.report.separated);
        for (const double g : log_loss_gradient(fit.weights, x, y)) {
            CHECK(std::abs(g) / 200.0 < 1e-6);
        }
        CHECK(fit.report.final_loss == doctest::Approx(log_loss(fit.weights, x, y)));
    }

    TEST_CASE("separable data sets the separation flag") {
        real_matrix x{ 4, 1 };
        const std::vector<double> v{ -2.0, -1.0, 1.0, 2.0 };
        std::copy(v.begin(), v.end(), x.data().begin());
        const std::vector<int> y{ 0, 0, 1, 1 };
        gd_config cfg;
        cfg.learning_rate = 1.0;
        cfg.max_iters = 1'000'000;
        const linear_fit fit = fit_logistic(x, y, cfg);
        CHECK(fit.report.separated);
        CHECK_FALSE(fit.report.converged);
        CHECK(fit.weights.is_finite());
        CHECK(predict_proba_logistic(fit.weights, std::vector<double>{ 2.0 }) > 0.99);
    }

    TEST_CASE("labels must be binary") {
        const real_matrix x{ 2, 1 };
        CHECK_THROWS_AS(static_cast<void>(fit_logistic(x, std::vector<int>{ 0, 2 })), nyts::training_error);
    }

    TEST_CASE("probabilities stay in the unit interval") {
        std::mt19937_64 gen{ 4 };
        for (int i = 0; i < 1000; ++i) {
            const std::vector<double> w = random_vector(gen, 4, -50.0, 50.0);
            const std::vector<double> x = random_vector(gen, 3, -50.0, 50.0);
            const double p = predict_proba_logistic(weight_vector{ w }, x);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_SUITE("softmax") {
    TEST_CASE("known values") {
        const std::vector<double> p = softmax(std::vector<double>{ 0.0, std::log(3.0) });
        CHECK(p[0] == doctest::Approx(0.25));
        CHECK(p[1] == doctest::Approx(0.75));
        const std::vector<double> big = softmax(std::vector<double>{ 1000.0, 1000.0 });
        CHECK(big[0] == doctest::Approx(0.5));
        CHECK(log_sum_exp(std::vector<double>{ 1000.0, 1000.0 }) == doctest::Approx(1000.0 + std::log(2.0)));
    }

    TEST_CASE("posteriors sum to one") {
        std::mt19937_64 gen{ 12 };
        for (int q = 0; q < 1000; ++q) {
            const std::size_t k = 2 + gen() % 6;
            std::vector<weight_vector> weights;
            for (std::size_t c = 0; c < k; ++c) {
                weights.emplace_back(random_vector(gen, 4, -20.0, 20.0));
            }
            const std::vector<double> x = random_vector(gen, 3, -10.0, 10.0);
            const std::vector<double> p = softmax_proba(weights, x);
            CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-9);
            for (const double v : p) {
                CHECK(v >= 0.0);
            }
        }
    }

    TEST_CASE("two classes reduce to the sigmoid of the score difference") {
        std::mt19937_64 gen{ 13 };
        for (int q = 0; q < 100; ++q) {
            const std::vector<weight_vector> w{ weight_vector{ random_vector(gen, 3) }, weight_vector{ random_vector(gen, 3) } };
            const std::vector<double> x = random_vector(gen, 2);
            CHECK(softmax_proba(w, x)[1] == doctest::Approx(sigmoid(w[1].dot(x) - w[0].dot(x))).epsilon(1e-12));
        }
    }

    TEST_CASE("fewer than two classes") {
        const std::vector<weight_vector> one{ weight_vector::zeros(1) };
        CHECK_THROWS_AS(static_cast<void>(softmax_proba(one, std::vector<double>{ 1.0 })), nyts::validation_error);
    }
}
