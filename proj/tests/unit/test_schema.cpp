#include "nyts/exceptions.hpp"
#include "nyts/schema/catalog.hpp"

#include "fixtures.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

using namespace nyts::schema;

namespace {

std::set<std::string> ids_with_role(const question_catalog &catalog, const question_role role) {
    std::set<std::string> ids;
    for (const survey_question *q : catalog.with_role(role)) {
        ids.insert(q->id);
    }
    return ids;
}

constexpr std::string_view minimal = R"(schema-format 1
catalog tiny
version tiny-1

question A
  text First
  role predictor
  kind single-choice
  code 1 Yes
  code 2 No
end

question B
  text Pick any
  role predictor
  kind multi-select
  code 1 Red
  code 3 Blue
end

question C
  text How many
  role predictor
  kind numeric-range
  range 1 4
end
)";

}  // namespace

TEST_CASE("shipped catalog has the expected roles") {
    const question_catalog &catalog = fixtures::shipped_catalog();
    CHECK(catalog.version() == "nyts2018-v1");
    CHECK(catalog.profile() == nyts2018_profile);
    CHECK(predictor_questions(catalog).size() == 47);
    CHECK(ids_with_role(catalog, question_role::target) == std::set<std::string>{ "Q15", "Q16", "Q17", "Q43", "Q44", "Q45" });
    CHECK(ids_with_role(catalog, question_role::cohort_non_smoker) == std::set<std::string>{ "Q7", "Q19", "Q24", "Q39", "Q59" });
    CHECK(ids_with_role(catalog, question_role::cohort_non_e_smoker) == std::set<std::string>{ "Q28" });
}

TEST_CASE("every domain starts with the unanswered code") {
    for (const survey_question &q : fixtures::shipped_catalog().questions()) {
        REQUIRE_FALSE(q.domain.codes.empty());
        CHECK(q.domain.codes.front().code == unanswered);
        CHECK(q.domain.contains(0));
        for (const int c : q.domain.answer_codes()) {
            CHECK(c > 0);
        }
    }
}

TEST_CASE("loading is a pure function of the document") {
    const std::string doc = to_document(fixtures::shipped_catalog());
    const question_catalog a = load_catalog(doc);
    const question_catalog b = load_catalog(doc);
    CHECK(a == b);
    CHECK(a == fixtures::shipped_catalog());
    CHECK(to_document(a) == doc);
}

TEST_CASE("feature layout expands multi-select questions") {
    const question_catalog catalog = load_catalog(minimal);
    const std::vector<feature_column> layout = feature_layout(catalog);
    REQUIRE(layout.size() == 4);
    CHECK(layout[0].name == "A");
    CHECK(layout[0].allowed == std::vector<int>{ 0, 1, 2 });
    CHECK(layout[1].name == "B_1");
    CHECK(layout[1].option == 1);
    CHECK(layout[1].allowed == std::vector<int>{ 0, 1 });
    CHECK(layout[2].name == "B_3");
    CHECK(layout[3].name == "C");
    CHECK(layout[3].max_code() == 4);
    CHECK_FALSE(layout[3].allows(5));
}

TEST_CASE("shipped layout columns are unique and cover the predictors") {
    const auto layout = feature_layout(fixtures::shipped_catalog());
    std::set<std::string> names;
    std::set<std::string> questions;
    for (const feature_column &col : layout) {
        CHECK(names.insert(col.name).second);
        questions.insert(col.question_id);
    }
    CHECK(questions.size() == 47);
}

TEST_CASE("malformed documents are rejected") {
    const auto rejects = [](const std::string &doc) { CHECK_THROWS_AS(static_cast<void>(load_catalog(doc)), nyts::schema_error); };
    const std::string head = "schema-format 1\nversion v\n";

    SUBCASE("empty") { rejects(""); }
    SUBCASE("wrong format version") { rejects("schema-format 2\nversion v\n"); }
    SUBCASE("missing version") { rejects("schema-format 1\ncatalog x\n"); }
    SUBCASE("unterminated question") { rejects(head + "question A\n  text t\n  role predictor\n  kind single-choice\n  code 1 a\n  code 2 b\n"); }
    SUBCASE("duplicate id") {
        const std::string q = "question A\n text t\n role predictor\n kind single-choice\n code 1 a\n code 2 b\nend\n";
        rejects(head + q + q);
    }
    SUBCASE("code zero") { rejects(head + "question A\n text t\n role predictor\n kind single-choice\n code 0 a\n code 2 b\nend\n"); }
    SUBCASE("duplicate code") { rejects(head + "question A\n text t\n role predictor\n kind single-choice\n code 1 a\n code 1 b\nend\n"); }
    SUBCASE("non-integer code") { rejects(head + "question A\n text t\n role predictor\n kind single-choice\n code x a\n code 2 b\nend\n"); }
    SUBCASE("unknown kind") { rejects(head + "question A\n text t\n role predictor\n kind slider\n code 1 a\n code 2 b\nend\n"); }
    SUBCASE("target without full coverage") { rejects(head + "question A\n text t\n role target\n kind single-choice\n code 1 a\n code 2 b\n code 3 c\n yes 1\n no 2\nend\n"); }
    SUBCASE("cohort without never") { rejects(head + "question A\n text t\n role cohort-non-smoker\n kind single-choice\n code 1 a\n code 2 b\nend\n"); }
    SUBCASE("profile predictor count") { rejects("schema-format 1\nversion v\nprofile nyts2018\n"); }
}

TEST_CASE("a catalog with no questions is valid without a profile") {
    const question_catalog catalog = load_catalog("schema-format 1\nversion empty-1\n");
    CHECK(catalog.questions().empty());
    CHECK(feature_layout(catalog).empty());
}

TEST_CASE("errors name the line") {
    try {
        static_cast<void>(load_catalog("schema-format 1\nversion v\nbogus 1\n"));
        FAIL("expected an error");
    } catch (const nyts::schema_error &e) {
        CHECK(std::string{ e.what() }.find("line 3") != std::string::npos);
    }
}
