#include "nyts/ingest/prepare.hpp"

#include "nyts/exceptions.hpp"  // nyts::input_error

#include "fmt/format.h"  // fmt::format
#include "fmt/ranges.h"  // fmt::join

#include <optional>  // std::optional

namespace nyts::ingest {

cohort_result filter_never_smokers(const raw_table &table, const schema::question_catalog &catalog, const cohort_config &config) {
    struct check {
        const schema::survey_question *question;
        std::size_t column;
        std::size_t failed;
    };
    std::vector<check> checks;
    const auto add = [&](const schema::question_role role) {
        for (const schema::survey_question *q : catalog.with_role(role)) {
            if (role == schema::question_role::cohort_non_smoker && config.disabled.contains(q->id)) {
                continue;
            }
            const auto col = table.column_index(q->id);
            if (!col) {
                throw input_error{ fmt::format("cohort-selection question {} has no column in the input", q->id) };
            }
            checks.push_back({ q, *col, 0 });
        }
    };
    add(schema::question_role::cohort_non_smoker);
    if (config.non_e_smoker) {
        add(schema::question_role::cohort_non_e_smoker);
    }

    cohort_result result;
    result.table.columns = table.columns;
    result.table.in_catalog = table.in_catalog;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        bool keep = true;
        for (check &c : checks) {
            const cell v = table.rows[r][c.column];
            if (!v || *v != *c.question->never_code) {
                ++c.failed;
                keep = false;
            }
        }
        if (keep) {
            result.table.rows.push_back(table.rows[r]);
            result.table.row_ids.push_back(table.row_ids[r]);
        }
    }

    result.summary.rows_in = table.rows.size();
    result.summary.rows_out = result.table.rows.size();
    for (const check &c : checks) {
        result.summary.questions.push_back(c.question->id);
        result.summary.failed_by_question.emplace_back(c.question->id, c.failed);
    }
    return result;
}

std::string_view to_string(const target_policy policy) {
    return policy == target_policy::q16_only ? "q16-only" : "any-of-six";
}

target_policy parse_target_policy(const std::string_view text) {
    if (text == "q16-only") {
        return target_policy::q16_only;
    }
    if (text == "any-of-six") {
        return target_policy::any_of_six;
    }
    throw input_error{ fmt::format("unknown target policy '{}' (expected q16-only or any-of-six)", text) };
}

target_result derive_target(const raw_table &table, const schema::question_catalog &catalog, const target_policy policy) {
    struct target_column {
        const schema::survey_question *question;
        std::size_t column;
    };
    std::vector<target_column> targets;
    const auto add_target = [&](const schema::survey_question *q) {
        const auto col = table.column_index(q->id);
        if (!col) {
            throw input_error{ fmt::format("target question {} has no column in the input", q->id) };
        }
        targets.push_back({ q, *col });
    };
    if (policy == target_policy::q16_only) {
        const schema::survey_question *q16 = catalog.find(q16_id);
        if (q16 == nullptr || q16->role != schema::question_role::target) {
            throw input_error{ fmt::format("catalog '{}' has no target question {}", catalog.name(), q16_id) };
        }
        add_target(q16);
    } else {
        for (const schema::survey_question *q : catalog.with_role(schema::question_role::target)) {
            add_target(q);
        }
        if (targets.empty()) {
            throw input_error{ fmt::format("catalog '{}' has no target questions", catalog.name()) };
        }
    }

    const std::vector<schema::feature_column> layout = schema::feature_layout(catalog);
    target_result result;
    result.summary.policy = policy;
    result.summary.rows_in = table.rows.size();

    std::vector<std::optional<std::size_t>> sources;
    for (const schema::feature_column &col : layout) {
        sources.push_back(table.column_index(col.name));
        if (!sources.back()) {
            result.summary.absent_feature_columns.push_back(col.name);
        }
        result.data.feature_names.push_back(col.name);
    }
    result.data.features = code_matrix{ 0, layout.size() };

    std::vector<int> features(layout.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto &row = table.rows[r];
        bool any_yes = false;
        bool all_no = true;
        for (const target_column &t : targets) {
            const int v = row[t.column].value_or(schema::unanswered);
            if (t.question->is_yes(v)) {
                any_yes = true;
            } else if (!t.question->is_no(v)) {
                all_no = false;
            }
        }
        int label = 0;
        if (any_yes) {
            label = 1;
        } else if (!all_no) {
            ++result.summary.dropped_undefined;
            continue;
        }

        for (std::size_t c = 0; c < layout.size(); ++c) {
            features[c] = sources[c] ? row[*sources[c]].value_or(schema::unanswered) : schema::unanswered;
        }
        result.data.features.append_row(features);
        result.data.labels.push_back(label);
        result.data.row_ids.push_back(table.row_ids[r]);
    }
    if (layout.empty()) {
        result.data.features = code_matrix{ result.data.labels.size(), 0 };
    }
    result.summary.rows_out = result.data.size();
    result.summary.positives = result.data.count_label(1);
    result.summary.negatives = result.data.count_label(0);

    validate_domains(result.data, layout);
    return result;
}

void validate_domains(const dataset &ds, const std::vector<schema::feature_column> &layout) {
    if (layout.size() != ds.feature_count()) {
        throw input_error{ fmt::format("dataset has {} feature columns, layout has {}", ds.feature_count(), layout.size()) };
    }
    std::vector<std::string> offending;
    std::size_t total = 0;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto row = ds.features.row(r);
        for (std::size_t c = 0; c < layout.size(); ++c) {
            if (!layout[c].allows(row[c])) {
                if (++total <= 20) {
                    offending.push_back(fmt::format("row {} column {} = {}", ds.row_ids[r], layout[c].name, row[c]));
                }
            }
        }
    }
    if (total > 0) {
        throw input_error{ fmt::format("{} cells outside their declared answer domain: {}{}", total, fmt::join(offending, "; "), total > offending.size() ? "; ..." : "") };
    }
}

dataset one_hot(const dataset &ds, const std::vector<schema::feature_column> &layout) {
    if (layout.size() != ds.feature_count()) {
        throw input_error{ "one_hot: layout does not match the dataset's columns" };
    }
    struct indicator {
        std::size_t source;
        int code;
    };
    std::vector<indicator> indicators;
    dataset out;
    for (std::size_t c = 0; c < layout.size(); ++c) {
        for (const int code : layout[c].allowed) {
            if (code != schema::unanswered) {
                indicators.push_back({ c, code });
                out.feature_names.push_back(fmt::format("{}={}", layout[c].name, code));
            }
        }
    }
    out.features = code_matrix{ ds.size(), indicators.size() };
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto src = ds.features.row(r);
        auto dst = out.features.row(r);
        for (std::size_t k = 0; k < indicators.size(); ++k) {
            dst[k] = src[indicators[k].source] == indicators[k].code ? 1 : 0;
        }
    }
    out.labels = ds.labels;
    out.row_ids = ds.row_ids;
    return out;
}

}  // namespace nyts::ingest
