#pragma once

#include "nyts/exceptions.hpp"      // nyts::validation_error
#include "nyts/schema/catalog.hpp"  // nyts::schema::question_catalog

#include <map>          // std::map
#include <span>         // std::span
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <variant>      // std::variant
#include <vector>       // std::vector

namespace nyts::service {

/// A rejected submission. `field()` is the JSON path or question id at fault.
class submission_error : public validation_error {
  public:
    submission_error(std::string field, const std::string &what) :
        validation_error{ what },
        field_{ std::move(field) } {}

    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Single-choice and numeric answers carry one code, multi-select answers the selected option codes.
using answer_value = std::variant<int, std::vector<int>>;

struct answer_submission {
    std::map<std::string, answer_value> answers;

    bool operator==(const answer_submission &) const = default;
};

/// Parses `{"answers": {"Q1": 3, "Q4": [1, 3]}}`. Throws submission_error naming the field.
[[nodiscard]] answer_submission parse_submission(std::string_view body);

/// Predictor feature vector in feature_layout order. Omitted questions and code 0 stay 0;
/// multi-select answers set their option columns to 1. Throws submission_error for unknown
/// or non-predictor questions, wrong answer shapes, and codes outside a question's options.
[[nodiscard]] std::vector<int> encode(const answer_submission &submission, const schema::question_catalog &catalog);

/// Inverse of encode for one feature vector: non-zero answers only.
[[nodiscard]] answer_submission decode(std::span<const int> features, const schema::question_catalog &catalog);

/// JSON body of a submission, as accepted by parse_submission.
[[nodiscard]] std::string to_json(const answer_submission &submission);

}  // namespace nyts::service
