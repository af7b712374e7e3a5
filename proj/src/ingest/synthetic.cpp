#include "nyts/ingest/synthetic.hpp"

#include "nyts/exceptions.hpp"     // nyts::input_error
#include "nyts/ingest/prepare.hpp" // nyts::ingest::q16_id
#include "nyts/random.hpp"         // nyts::rng

#include "fmt/format.h"  // fmt::format

#include <charconv>       // std::from_chars
#include <unordered_map>  // std::unordered_map

namespace nyts::ingest {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

double to_double(const std::string_view token, const std::string_view context) {
    double v = 0.0;
    const std::string_view t = trim(token);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw input_error{ fmt::format("signal config: '{}' is not a number in '{}'", token, context) };
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, const char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = s.find(sep);
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) {
            break;
        }
        s.remove_prefix(pos + 1);
    }
    return out;
}

void check_probability(const double p, const std::string_view name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw input_error{ fmt::format("signal config: {} must lie in [0, 1], got {}", name, p) };
    }
}

}  // namespace

signal_config parse_signal(const std::string_view text) {
    signal_config cfg;
    for (const std::string_view part : split(text, ';')) {
        if (part.empty()) {
            continue;
        }
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            for (const std::string_view term : split(part, ',')) {
                const auto colon = term.find(':');
                if (colon == std::string_view::npos || trim(term.substr(0, colon)).empty()) {
                    throw input_error{ fmt::format("signal config: expected <column>:<weight>, got '{}'", term) };
                }
                cfg.weights.emplace_back(std::string{ trim(term.substr(0, colon)) }, to_double(term.substr(colon + 1), term));
            }
            continue;
        }
        const std::string_view key = trim(part.substr(0, eq));
        const double value = to_double(part.substr(eq + 1), part);
        if (key == "intercept") {
            cfg.intercept = value;
        } else if (key == "noise") {
            if (value < 0.0) {
                throw input_error{ "signal config: noise must be non-negative" };
            }
            cfg.noise = value;
        } else if (key == "missing") {
            check_probability(value, key);
            cfg.missing_rate = value;
        } else if (key == "target-missing") {
            check_probability(value, key);
            cfg.target_missing_rate = value;
        } else if (key == "ever") {
            check_probability(value, key);
            cfg.ever_smoker_rate = value;
        } else if (key == "select") {
            check_probability(value, key);
            cfg.select_rate = value;
        } else {
            throw input_error{ fmt::format("signal config: unknown key '{}'", key) };
        }
    }
    return cfg;
}

std::string to_string(const signal_config &signal) {
    std::string out;
    for (std::size_t i = 0; i < signal.weights.size(); ++i) {
        out += fmt::format("{}{}:{}", i == 0 ? "" : ",", signal.weights[i].first, signal.weights[i].second);
    }
    out += fmt::format(";intercept={};noise={};missing={};target-missing={};ever={};select={}", signal.intercept, signal.noise, signal.missing_rate, signal.target_missing_rate, signal.ever_smoker_rate, signal.select_rate);
    return out;
}

raw_table generate_synthetic(const std::size_t n_rows, const schema::question_catalog &catalog, const signal_config &signal, const std::uint64_t seed) {
    if (n_rows == 0) {
        throw input_error{ "synthetic data needs at least one row" };
    }

    raw_table table;
    std::unordered_map<std::string, std::size_t> column_of;
    std::unordered_map<std::string, double> center_of;
    std::vector<std::size_t> first_column;  // per question
    for (const schema::survey_question &q : catalog.questions()) {
        first_column.push_back(table.columns.size());
        for (const schema::feature_column &col : schema::columns_of(q)) {
            column_of[col.name] = table.columns.size();
            table.columns.push_back(col.name);
            table.in_catalog.push_back(true);
            if (q.role == schema::question_role::predictor) {
                double sum = 0.0;
                std::size_t count = 0;
                for (const int code : col.allowed) {
                    if (code != schema::unanswered) {
                        sum += code;
                        ++count;
                    }
                }
                center_of[col.name] = count > 0 ? sum / static_cast<double>(count) : 0.0;
            }
        }
    }

    struct term {
        std::size_t column;
        double weight;
        double center;
    };
    std::vector<term> terms;
    for (const auto &[name, weight] : signal.weights) {
        const auto it = center_of.find(name);
        if (it == center_of.end()) {
            throw input_error{ fmt::format("signal references '{}', which is not a predictor column of catalog '{}'", name, catalog.name()) };
        }
        terms.push_back({ column_of.at(name), weight, it->second });
    }

    std::vector<std::size_t> non_smoker_questions;
    for (std::size_t k = 0; k < catalog.questions().size(); ++k) {
        if (catalog.questions()[k].role == schema::question_role::cohort_non_smoker) {
            non_smoker_questions.push_back(k);
        }
    }

    rng gen{ seed };
    const auto pick = [&gen](const std::vector<int> &codes) { return codes[gen.uniform_index(codes.size())]; };

    table.rows.reserve(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::vector<cell> row(table.columns.size());

        for (std::size_t k = 0; k < catalog.questions().size(); ++k) {
            const schema::survey_question &q = catalog.questions()[k];
            if (q.role != schema::question_role::predictor) {
                continue;
            }
            if (gen.bernoulli(signal.missing_rate)) {
                continue;
            }
            if (q.domain.kind == schema::answer_kind::multi_select) {
                const std::size_t options = q.domain.answer_codes().size();
                for (std::size_t o = 0; o < options; ++o) {
                    if (gen.bernoulli(signal.select_rate)) {
                        row[first_column[k] + o] = 1;
                    }
                }
            } else {
                row[first_column[k]] = pick(q.domain.answer_codes());
            }
        }

        const bool ever = !non_smoker_questions.empty() && gen.bernoulli(signal.ever_smoker_rate);
        const std::size_t tried = ever ? non_smoker_questions[gen.uniform_index(non_smoker_questions.size())] : catalog.questions().size();
        for (std::size_t k = 0; k < catalog.questions().size(); ++k) {
            const schema::survey_question &q = catalog.questions()[k];
            if (q.role == schema::question_role::cohort_non_smoker) {
                if (k == tried) {
                    std::vector<int> others;
                    for (const int code : q.domain.answer_codes()) {
                        if (code != *q.never_code) {
                            others.push_back(code);
                        }
                    }
                    row[first_column[k]] = pick(others);
                } else {
                    row[first_column[k]] = *q.never_code;
                }
            } else if (q.role == schema::question_role::cohort_non_e_smoker) {
                row[first_column[k]] = pick(q.domain.answer_codes());
            }
        }

        double score = signal.intercept;
        for (const term &t : terms) {
            score += t.weight * (static_cast<double>(row[t.column].value_or(schema::unanswered)) - t.center);
        }
        const double latent = score + signal.noise * gen.logistic();
        for (std::size_t k = 0; k < catalog.questions().size(); ++k) {
            const schema::survey_question &q = catalog.questions()[k];
            if (q.role != schema::question_role::target) {
                continue;
            }
            const bool yes = q.id == q16_id ? latent > 0.0 : latent + gen.logistic() > 0.0;
            const int code = pick(yes ? q.yes_codes : q.no_codes);
            if (!gen.bernoulli(signal.target_missing_rate)) {
                row[first_column[k]] = code;
            }
        }

        table.rows.push_back(std::move(row));
        table.row_ids.push_back(r);
    }
    return table;
}

}  // namespace nyts::ingest
