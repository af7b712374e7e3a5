#include "nyts/service/encoder.hpp"

#include "fmt/format.h"  // fmt::format
#include "json.hpp"      // nlohmann::json

#include <algorithm>  // std::find
#include <limits>     // std::numeric_limits

namespace nyts::service {

namespace {

int as_code(const nlohmann::json &value, const std::string &field) {
    if (!value.is_number_integer()) {
        throw submission_error{ field, fmt::format("{}: expected an integer answer code", field) };
    }
    const auto code = value.get<long long>();
    if (code < std::numeric_limits<int>::min() || code > std::numeric_limits<int>::max()) {
        throw submission_error{ field, fmt::format("{}: answer code {} is out of range", field, code) };
    }
    return static_cast<int>(code);
}

}  // namespace

answer_submission parse_submission(const std::string_view body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error &e) {
        throw submission_error{ "body", fmt::format("body: not valid JSON ({})", e.what()) };
    }
    if (!doc.is_object()) {
        throw submission_error{ "body", "body: expected a JSON object" };
    }
    const auto it = doc.find("answers");
    if (it == doc.end()) {
        throw submission_error{ "answers", "answers: field is required" };
    }
    if (!it->is_object()) {
        throw submission_error{ "answers", "answers: expected an object mapping question ids to codes" };
    }
    answer_submission sub;
    for (const auto &[id, value] : it->items()) {
        const std::string field = "answers." + id;
        if (value.is_array()) {
            std::vector<int> codes;
            for (const nlohmann::json &v : value) {
                codes.push_back(as_code(v, field));
            }
            sub.answers.emplace(id, std::move(codes));
        } else {
            sub.answers.emplace(id, as_code(value, field));
        }
    }
    return sub;
}

std::vector<int> encode(const answer_submission &submission, const schema::question_catalog &catalog) {
    for (const auto &[id, value] : submission.answers) {
        const schema::survey_question *q = catalog.find(id);
        if (q == nullptr) {
            throw submission_error{ id, fmt::format("{}: unknown question", id) };
        }
        if (q->role != schema::question_role::predictor) {
            throw submission_error{ id, fmt::format("{}: not a questionnaire question", id) };
        }
        const bool multi = q->domain.kind == schema::answer_kind::multi_select;
        if (multi != std::holds_alternative<std::vector<int>>(value)) {
            throw submission_error{ id, fmt::format("{}: expected {}", id, multi ? "a list of selected option codes" : "a single answer code") };
        }
        const auto check = [&](const int code) {
            if (!q->domain.contains(code)) {
                throw submission_error{ id, fmt::format("{}: code {} is not an answer option", id, code) };
            }
        };
        if (multi) {
            for (const int code : std::get<std::vector<int>>(value)) {
                check(code);
            }
        } else {
            check(std::get<int>(value));
        }
    }

    const std::vector<schema::feature_column> layout = schema::feature_layout(catalog);
    std::vector<int> features(layout.size(), schema::unanswered);
    for (std::size_t j = 0; j < layout.size(); ++j) {
        const schema::feature_column &col = layout[j];
        const auto it = submission.answers.find(col.question_id);
        if (it == submission.answers.end()) {
            continue;
        }
        if (col.option) {
            const auto &selected = std::get<std::vector<int>>(it->second);
            features[j] = std::find(selected.begin(), selected.end(), *col.option) != selected.end() ? 1 : 0;
        } else {
            features[j] = std::get<int>(it->second);
        }
    }
    return features;
}

answer_submission decode(const std::span<const int> features, const schema::question_catalog &catalog) {
    const std::vector<schema::feature_column> layout = schema::feature_layout(catalog);
    if (features.size() != layout.size()) {
        throw validation_error{ fmt::format("expected {} features, got {}", layout.size(), features.size()) };
    }
    answer_submission sub;
    for (std::size_t j = 0; j < layout.size(); ++j) {
        const schema::feature_column &col = layout[j];
        if (col.option) {
            auto [it, inserted] = sub.answers.try_emplace(col.question_id, std::vector<int>{});
            if (features[j] == 1) {
                std::get<std::vector<int>>(it->second).push_back(*col.option);
            }
        } else if (features[j] != schema::unanswered) {
            sub.answers.emplace(col.question_id, features[j]);
        }
    }
    // multi-selects with nothing ticked are left out, like any unanswered question
    std::erase_if(sub.answers, [](const auto &entry) {
        const auto *list = std::get_if<std::vector<int>>(&entry.second);
        return list != nullptr && list->empty();
    });
    return sub;
}

std::string to_json(const answer_submission &submission) {
    nlohmann::json answers = nlohmann::json::object();
    for (const auto &[id, value] : submission.answers) {
        if (const int *code = std::get_if<int>(&value)) {
            answers[id] = *code;
        } else {
            answers[id] = std::get<std::vector<int>>(value);
        }
    }
    return nlohmann::json{ { "answers", answers } }.dump();
}

}  // namespace nyts::service
