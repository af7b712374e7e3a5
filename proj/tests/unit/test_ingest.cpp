#include "nyts/exceptions.hpp"
#include "nyts/ingest/dataset.hpp"
#include "nyts/ingest/prepare.hpp"
#include "nyts/ingest/raw_table.hpp"
#include "nyts/ingest/split.hpp"
#include "nyts/ingest/synthetic.hpp"
#include "nyts/ml/decision_tree.hpp"

#include "fixtures.hpp"
#include "pipeline.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

using namespace nyts::ingest;
using fixtures::shipped_catalog;

namespace {

// cohort columns, the six targets and two predictors
const std::string header = "Q1,Q6,Q7,Q19,Q24,Q28,Q39,Q59,Q15,Q16,Q17,Q43,Q44,Q45\n";

raw_table table_of(const std::string &body) {
    return parse_csv(header + body, shipped_catalog());
}

raw_table synthetic(const std::size_t n, const std::uint64_t seed, const std::string &signal = "Q6:1.5,Q27:-2,Q30:1;intercept=-1") {
    return generate_synthetic(n, shipped_catalog(), parse_signal(signal), seed);
}

}  // namespace

TEST_SUITE("raw table") {
    TEST_CASE("cells parse as integer codes or null") {
        const raw_table t = table_of("2.0,1,2,2,2,2,2,1,3,4,,3,3,3\n");
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0][0] == 2);
        CHECK(t.rows[0][10] == std::nullopt);
        CHECK(t.null_count() == 1);
    }

    TEST_CASE("non-numeric and fractional cells become null") {
        const raw_table t = table_of("x,1.5,2,2,2,2,2,1,3,4,3,3,3,3\n");
        CHECK(t.rows[0][0] == std::nullopt);
        CHECK(t.rows[0][1] == std::nullopt);
    }

    TEST_CASE("unknown columns are kept and flagged") {
        const raw_table t = parse_csv("Q1,WEIGHT\n1,0.5\n", shipped_catalog());
        CHECK(t.unknown_columns() == std::vector<std::string>{ "WEIGHT" });
    }

    TEST_CASE("structural problems are input errors") {
        CHECK_THROWS_AS(static_cast<void>(parse_csv("", shipped_catalog())), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_csv("Q1,Q2\n", shipped_catalog())), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_csv("Q1,Q2\n1,2,3\n", shipped_catalog())), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_csv("A,B\n1,2\n", shipped_catalog())), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_csv("Q1,Q1\n1,2\n", shipped_catalog())), nyts::input_error);
    }

    TEST_CASE("impute is idempotent and touches only nulls") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            raw_table t = synthetic(200, seed);
            std::mt19937_64 gen{ seed };
            for (auto &row : t.rows) {
                row[gen() % row.size()] = std::nullopt;
            }
            const raw_table once = impute_nulls(t);
            CHECK(impute_nulls(once) == once);
            CHECK(once.null_count() == 0);
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                for (std::size_t c = 0; c < t.columns.size(); ++c) {
                    CHECK(once.rows[r][c] == t.rows[r][c].value_or(0));
                }
            }
        }
    }

    TEST_CASE("csv text round-trips") {
        const raw_table t = synthetic(50, 3);
        CHECK(parse_csv(to_csv(t), shipped_catalog()) == t);
    }
}

TEST_SUITE("cohort filter") {
    TEST_CASE("keeps only never answers on enabled questions") {
        // Q59 is ignored by default, so the second row survives with Q59 = 3
        const raw_table t = table_of("1,1,2,2,2,2,2,1,3,3,3,3,3,3\n"
                                     "1,1,2,2,2,2,2,3,3,3,3,3,3,3\n"
                                     "1,1,1,2,2,2,2,1,3,3,3,3,3,3\n"
                                     "1,1,2,2,,2,2,1,3,3,3,3,3,3\n");
        const cohort_result r = filter_never_smokers(t, shipped_catalog());
        CHECK(r.table.row_ids == std::vector<std::size_t>{ 0, 1 });
        CHECK(r.summary.rows_in == 4);
        CHECK(r.summary.rows_out == 2);

        cohort_config with_q59;
        with_q59.disabled.clear();
        CHECK(filter_never_smokers(t, shipped_catalog(), with_q59).table.row_ids == std::vector<std::size_t>{ 0 });
    }

    TEST_CASE("non-e-smoker option adds Q28") {
        const raw_table t = table_of("1,1,2,2,2,1,2,1,3,3,3,3,3,3\n"
                                     "1,1,2,2,2,2,2,1,3,3,3,3,3,3\n");
        CHECK(filter_never_smokers(t, shipped_catalog()).table.rows.size() == 2);
        CHECK(filter_never_smokers(t, shipped_catalog(), { { "Q59" }, true }).table.row_ids == std::vector<std::size_t>{ 1 });
    }

    TEST_CASE("output is a subset and re-filtering is a no-op") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const raw_table t = impute_nulls(synthetic(300, seed));
            const raw_table once = filter_never_smokers(t, shipped_catalog()).table;
            CHECK(filter_never_smokers(once, shipped_catalog()).table == once);
            for (std::size_t i = 0; i < once.rows.size(); ++i) {
                const std::size_t id = once.row_ids[i];
                CHECK(once.rows[i] == t.rows[id]);
            }
        }
    }

    TEST_CASE("missing cohort column is an input error") {
        CHECK_THROWS_AS(static_cast<void>(filter_never_smokers(parse_csv("Q1,Q16\n1,1\n", shipped_catalog()), shipped_catalog())), nyts::input_error);
    }
}

TEST_SUITE("target") {
    TEST_CASE("q16-only uses the yes/no groups and drops unanswered") {
        const raw_table t = impute_nulls(table_of("1,1,2,2,2,2,2,1,4,1,4,4,4,4\n"
                                                  "1,1,2,2,2,2,2,1,1,2,4,4,4,4\n"
                                                  "1,1,2,2,2,2,2,1,1,3,4,4,4,4\n"
                                                  "1,1,2,2,2,2,2,1,1,4,1,1,1,1\n"
                                                  "1,1,2,2,2,2,2,1,1,,4,4,4,4\n"));
        const target_result r = derive_target(t, shipped_catalog());
        CHECK(r.data.labels == std::vector<int>{ 1, 1, 0, 0 });
        CHECK(r.summary.dropped_undefined == 1);
        CHECK(r.summary.positives == 2);
        CHECK(r.data.feature_count() == nyts::schema::feature_layout(shipped_catalog()).size());
    }

    TEST_CASE("any-of-six labels yes when any target is yes") {
        const raw_table t = impute_nulls(table_of("1,1,2,2,2,2,2,1,4,4,4,4,4,2\n"
                                                  "1,1,2,2,2,2,2,1,4,4,4,4,4,4\n"
                                                  "1,1,2,2,2,2,2,1,4,4,,4,4,4\n"));
        const target_result r = derive_target(t, shipped_catalog(), target_policy::any_of_six);
        CHECK(r.data.labels == std::vector<int>{ 1, 0 });
        CHECK(r.summary.dropped_undefined == 1);
    }

    TEST_CASE("target and cohort columns never enter the matrix") {
        const auto names = derive_target(impute_nulls(synthetic(20, 1)), shipped_catalog()).data.feature_names;
        for (const std::string excluded : { "Q7", "Q15", "Q16", "Q17", "Q19", "Q24", "Q28", "Q39", "Q43", "Q44", "Q45", "Q59" }) {
            CHECK(std::find(names.begin(), names.end(), excluded) == names.end());
        }
    }

    TEST_CASE("q16-only labels ignore every other column") {
        const raw_table base = impute_nulls(synthetic(400, 9));
        const std::vector<int> y = derive_target(base, shipped_catalog()).data.labels;
        const std::size_t q16 = *base.column_index("Q16");
        std::mt19937_64 gen{ 5 };
        for (std::size_t c = 0; c < base.columns.size(); ++c) {
            if (c == q16) {
                continue;
            }
            raw_table permuted = base;
            std::vector<nyts::ingest::cell> column;
            for (const auto &row : permuted.rows) {
                column.push_back(row[c]);
            }
            std::shuffle(column.begin(), column.end(), gen);
            for (std::size_t r = 0; r < permuted.rows.size(); ++r) {
                permuted.rows[r][c] = column[r];
            }
            CHECK(derive_target(permuted, shipped_catalog()).data.labels == y);
        }
    }

    TEST_CASE("out-of-domain cells are reported") {
        const raw_table t = impute_nulls(table_of("99,1,2,2,2,2,2,1,4,1,4,4,4,4\n"));
        try {
            static_cast<void>(derive_target(t, shipped_catalog()));
            FAIL("expected an input error");
        } catch (const nyts::input_error &e) {
            CHECK(std::string{ e.what() }.find("Q1") != std::string::npos);
            CHECK(std::string{ e.what() }.find("99") != std::string::npos);
        }
    }

    TEST_CASE("prepared datasets stay inside their domains") {
        const auto layout = nyts::schema::feature_layout(shipped_catalog());
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const dataset ds = derive_target(filter_never_smokers(impute_nulls(synthetic(500, seed)), shipped_catalog()).table, shipped_catalog()).data;
            CHECK_NOTHROW(validate_domains(ds, layout));
            for (std::size_t r = 0; r < ds.size(); ++r) {
                for (std::size_t c = 0; c < layout.size(); ++c) {
                    CHECK(layout[c].allows(ds.features(r, c)));
                }
            }
        }
    }

    TEST_CASE("one-hot gives one indicator per answer code") {
        const auto layout = nyts::schema::feature_layout(shipped_catalog());
        const dataset ds = derive_target(impute_nulls(synthetic(30, 2)), shipped_catalog()).data;
        const dataset hot = one_hot(ds, layout);
        std::size_t expected = 0;
        for (const auto &col : layout) {
            expected += col.allowed.size() - 1;
        }
        CHECK(hot.feature_count() == expected);
        for (std::size_t r = 0; r < hot.size(); ++r) {
            std::size_t ones = 0;
            std::size_t answered = 0;
            for (std::size_t c = 0; c < hot.feature_count(); ++c) {
                ones += static_cast<std::size_t>(hot.features(r, c));
            }
            for (std::size_t c = 0; c < ds.feature_count(); ++c) {
                answered += ds.features(r, c) != 0 ? 1 : 0;
            }
            CHECK(ones == answered);
        }
    }
}

TEST_SUITE("prepared csv") {
    TEST_CASE("round trip") {
        dataset ds = derive_target(impute_nulls(synthetic(100, 4)), shipped_catalog()).data;
        const dataset back = read_prepared_csv(to_prepared_csv(ds));
        CHECK(back.features == ds.features);
        CHECK(back.labels == ds.labels);
        CHECK(back.feature_names == ds.feature_names);
    }

    TEST_CASE("malformed files") {
        CHECK_THROWS_AS(static_cast<void>(read_prepared_csv("")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(read_prepared_csv("a,b\n1,1\n")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(read_prepared_csv("a,__label__\n1,2\n")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(read_prepared_csv("a,__label__\n-1,1\n")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(read_prepared_csv("a,__label__\n1\n")), nyts::input_error);
    }
}

TEST_SUITE("split") {
    std::vector<int> labels_with(const std::size_t n, const std::size_t positives) {
        std::vector<int> y(n, 0);
        std::fill_n(y.begin(), positives, 1);
        std::mt19937_64 gen{ n };
        std::shuffle(y.begin(), y.end(), gen);
        return y;
    }

    TEST_CASE("partition sizes, coverage and class balance") {
        std::mt19937_64 gen{ 17 };
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 10 + gen() % 500;
            const std::size_t pos = 2 + gen() % (n - 4);
            const std::vector<int> y = labels_with(n, pos);
            const double fraction = 0.1 + 0.05 * static_cast<double>(gen() % 10);
            const split_indices s = split_positions(y, { fraction, gen(), true });

            CHECK(s.test.size() == static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n))));
            CHECK(std::is_sorted(s.train.begin(), s.train.end()));
            CHECK(std::is_sorted(s.test.begin(), s.test.end()));
            std::vector<std::size_t> all = s.train;
            all.insert(all.end(), s.test.begin(), s.test.end());
            std::sort(all.begin(), all.end());
            std::vector<std::size_t> expected(n);
            std::iota(expected.begin(), expected.end(), 0);
            CHECK(all == expected);

            const auto test_pos = static_cast<double>(std::count_if(s.test.begin(), s.test.end(), [&](std::size_t i) { return y[i] == 1; }));
            const double ideal = static_cast<double>(pos) * static_cast<double>(s.test.size()) / static_cast<double>(n);
            CHECK(std::abs(test_pos - ideal) <= 1.0);
        }
    }

    TEST_CASE("equal seeds give equal partitions") {
        const std::vector<int> y = labels_with(300, 90);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto a = split_positions(y, { 0.2, seed, true });
            const auto b = split_positions(y, { 0.2, seed, true });
            CHECK(a.test == b.test);
        }
    }

    TEST_CASE("different seeds give different partitions") {
        const std::vector<int> y = labels_with(100, 40);
        std::size_t differ = 0;
        const std::size_t pairs = 500;
        for (std::uint64_t s = 0; s < pairs; ++s) {
            differ += split_positions(y, { 0.2, 2 * s, true }).test != split_positions(y, { 0.2, 2 * s + 1, true }).test ? 1 : 0;
        }
        CHECK(static_cast<double>(differ) / static_cast<double>(pairs) > 0.99);
    }

    TEST_CASE("invalid requests") {
        const std::vector<int> y{ 0, 0, 0, 1 };
        CHECK_THROWS_AS(static_cast<void>(split_positions(std::vector<int>{}, {})), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(split_positions(y, { 0.0, 0, true })), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(split_positions(y, { 1.0, 0, true })), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(split_positions(y, { 0.5, 0, true })), nyts::input_error);
        CHECK_NOTHROW(static_cast<void>(split_positions(y, { 0.5, 0, false })));
    }

    TEST_CASE("dataset split keeps rows intact") {
        const dataset ds = derive_target(impute_nulls(synthetic(200, 8)), shipped_catalog()).data;
        const auto [train, test] = train_test_split(ds, { 0.2, 1, true });
        CHECK(train.size() + test.size() == ds.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            const std::size_t src = static_cast<std::size_t>(std::find(ds.row_ids.begin(), ds.row_ids.end(), test.row_ids[i]) - ds.row_ids.begin());
            CHECK(test.labels[i] == ds.labels[src]);
            CHECK(std::equal(test.features.row(i).begin(), test.features.row(i).end(), ds.features.row(src).begin()));
        }
    }
}

TEST_SUITE("synthetic") {
    TEST_CASE("deterministic per seed") {
        CHECK(synthetic(100, 5) == synthetic(100, 5));
        CHECK_FALSE(synthetic(100, 5) == synthetic(100, 6));
    }

    TEST_CASE("signal text round-trips") {
        const signal_config s = parse_signal("Q6:1.5,Q27:-2;intercept=-1;noise=0;missing=0.1");
        CHECK(s.weights.size() == 2);
        CHECK(s.intercept == -1.0);
        CHECK(s.noise == 0.0);
        CHECK(s.missing_rate == 0.1);
        CHECK(parse_signal(to_string(s)) == s);
    }

    TEST_CASE("bad signals") {
        CHECK_THROWS_AS(static_cast<void>(parse_signal("Q6=1")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_signal("Q6:abc")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_signal(";missing=2")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(parse_signal(";color=1")), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(generate_synthetic(10, shipped_catalog(), parse_signal("Q16:1"), 0)), nyts::input_error);
        CHECK_THROWS_AS(static_cast<void>(generate_synthetic(0, shipped_catalog(), {}, 0)), nyts::input_error);
    }

    TEST_CASE("noiseless labels follow the planted score") {
        // Q6 alone with a positive weight: higher codes must never be labelled less often
        const raw_table t = impute_nulls(generate_synthetic(3000, shipped_catalog(), parse_signal("Q6:3;noise=0;target-missing=0"), 11));
        const dataset ds = derive_target(t, shipped_catalog()).data;
        const auto q6 = static_cast<std::size_t>(std::find(ds.feature_names.begin(), ds.feature_names.end(), "Q6") - ds.feature_names.begin());
        std::map<int, std::set<int>> labels_by_code;
        for (std::size_t r = 0; r < ds.size(); ++r) {
            labels_by_code[ds.features(r, q6)].insert(ds.labels[r]);
        }
        for (const auto &[code, labels] : labels_by_code) {
            CHECK(labels.size() == 1);
        }
    }

    TEST_CASE("a strong noiseless signal is learnable by a shallow tree") {
        const dataset cohort = fixtures::synthetic_cohort(shipped_catalog(), 5000, 12, "Q6:1.5,Q27:-2,Q30:1;intercept=-1;noise=0");
        REQUIRE(cohort.size() == 5000);
        const auto [train, test] = train_test_split(cohort, { 0.2, 12, true });
        const nyts::ml::decision_tree tree = nyts::ml::fit_decision_tree(train.features, train.labels, { 3, 2 });
        std::size_t correct = 0;
        for (std::size_t r = 0; r < test.size(); ++r) {
            correct += tree.leaf_for(test.features.row(r)).label == test.labels[r] ? 1 : 0;
        }
        CHECK(static_cast<double>(correct) / static_cast<double>(test.size()) >= 0.95);
    }
}
