#pragma once

#include <cstddef>      // std::size_t
#include <filesystem>   // std::filesystem::path
#include <optional>     // std::optional
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace nyts::schema {

/// Reserved answer code for "unanswered"; present in every domain.
inline constexpr int unanswered = 0;

enum class answer_kind {
    single_choice,
    multi_select,
    numeric_range,
};

enum class question_role {
    predictor,
    cohort_non_smoker,
    cohort_non_e_smoker,
    target,
};

[[nodiscard]] std::string_view to_string(answer_kind kind);
[[nodiscard]] std::string_view to_string(question_role role);

struct answer_code {
    int code{ unanswered };
    std::string label;

    bool operator==(const answer_code &) const = default;
};

/// Codes in declaration order; element 0 is always {0, "unanswered"}.
struct answer_domain {
    answer_kind kind{ answer_kind::single_choice };
    std::vector<answer_code> codes;

    [[nodiscard]] bool contains(int code) const;
    [[nodiscard]] std::vector<int> answer_codes() const;  ///< non-zero codes
    [[nodiscard]] int max_code() const;

    bool operator==(const answer_domain &) const = default;
};

struct survey_question {
    std::string id;
    std::string text;
    answer_domain domain;
    question_role role{ question_role::predictor };
    /// Cohort-selection questions: the code meaning "never" / "no".
    std::optional<int> never_code;
    /// Target questions: the two answer classes. Together they cover every non-zero code.
    std::vector<int> yes_codes;
    std::vector<int> no_codes;

    [[nodiscard]] bool is_yes(int code) const;
    [[nodiscard]] bool is_no(int code) const;

    bool operator==(const survey_question &) const = default;
};

/// One column of the modeling matrix. Multi-select questions contribute one
/// binary column per option (`<id>_<code>`), everything else one column named by id.
struct feature_column {
    std::string name;
    std::string question_id;
    std::optional<int> option;
    /// Legal cell values, 0 included.
    std::vector<int> allowed;

    [[nodiscard]] bool allows(int value) const;
    [[nodiscard]] int max_code() const;

    bool operator==(const feature_column &) const = default;
};

class question_catalog {
  public:
    question_catalog() = default;
    question_catalog(std::string name, std::string version, std::string profile, std::vector<survey_question> questions);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] const std::string &version() const noexcept { return version_; }
    /// "nyts2018" enables the shipped-catalog checks; empty otherwise.
    [[nodiscard]] const std::string &profile() const noexcept { return profile_; }
    [[nodiscard]] const std::vector<survey_question> &questions() const noexcept { return questions_; }

    [[nodiscard]] const survey_question *find(std::string_view id) const;
    [[nodiscard]] std::vector<const survey_question *> with_role(question_role role) const;

    bool operator==(const question_catalog &) const = default;

  private:
    std::string name_;
    std::string version_;
    std::string profile_;
    std::vector<survey_question> questions_;
};

inline constexpr std::string_view nyts2018_profile = "nyts2018";
inline constexpr std::size_t nyts2018_predictor_count = 47;

/// Parses a schema document (format in docs/schema-format.md). Throws nyts::schema_error.
[[nodiscard]] question_catalog load_catalog(std::string_view document);
[[nodiscard]] question_catalog load_catalog_file(const std::filesystem::path &path);

/// Serializes a catalog back into the schema document format.
[[nodiscard]] std::string to_document(const question_catalog &catalog);

/// Questions with role predictor, in catalog order.
[[nodiscard]] std::vector<survey_question> predictor_questions(const question_catalog &catalog);

/// Data columns a question occupies in a survey CSV.
[[nodiscard]] std::vector<feature_column> columns_of(const survey_question &question);

/// Modeling columns: every predictor question, multi-selects expanded, catalog order.
[[nodiscard]] std::vector<feature_column> feature_layout(const question_catalog &catalog);

}  // namespace nyts::schema
