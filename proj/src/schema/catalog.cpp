#include "nyts/schema/catalog.hpp"

#include "nyts/checksum.hpp"    // nyts::read_file
#include "nyts/exceptions.hpp"  // nyts::schema_error

#include "fmt/format.h"  // fmt::format
#include "fmt/ranges.h"  // fmt::join

#include <algorithm>     // std::find, std::any_of, std::sort
#include <charconv>      // std::from_chars
#include <set>           // std::set
#include <unordered_set> // std::unordered_set
#include <utility>       // std::move

namespace nyts::schema {

std::string_view to_string(const answer_kind kind) {
    switch (kind) {
        case answer_kind::single_choice:
            return "single-choice";
        case answer_kind::multi_select:
            return "multi-select";
        case answer_kind::numeric_range:
            return "numeric-range";
    }
    return "unknown";
}

std::string_view to_string(const question_role role) {
    switch (role) {
        case question_role::predictor:
            return "predictor";
        case question_role::cohort_non_smoker:
            return "cohort-non-smoker";
        case question_role::cohort_non_e_smoker:
            return "cohort-non-e-smoker";
        case question_role::target:
            return "target";
    }
    return "unknown";
}

bool answer_domain::contains(const int code) const {
    return std::any_of(codes.begin(), codes.end(), [code](const answer_code &c) { return c.code == code; });
}

std::vector<int> answer_domain::answer_codes() const {
    std::vector<int> out;
    for (const answer_code &c : codes) {
        if (c.code != unanswered) {
            out.push_back(c.code);
        }
    }
    return out;
}

int answer_domain::max_code() const {
    int m = unanswered;
    for (const answer_code &c : codes) {
        m = std::max(m, c.code);
    }
    return m;
}

bool survey_question::is_yes(const int code) const {
    return std::find(yes_codes.begin(), yes_codes.end(), code) != yes_codes.end();
}

bool survey_question::is_no(const int code) const {
    return std::find(no_codes.begin(), no_codes.end(), code) != no_codes.end();
}

bool feature_column::allows(const int value) const {
    return std::find(allowed.begin(), allowed.end(), value) != allowed.end();
}

int feature_column::max_code() const {
    return allowed.empty() ? 0 : *std::max_element(allowed.begin(), allowed.end());
}

question_catalog::question_catalog(std::string name, std::string version, std::string profile, std::vector<survey_question> questions) :
    name_{ std::move(name) },
    version_{ std::move(version) },
    profile_{ std::move(profile) },
    questions_{ std::move(questions) } {}

const survey_question *question_catalog::find(const std::string_view id) const {
    for (const survey_question &q : questions_) {
        if (q.id == id) {
            return &q;
        }
    }
    return nullptr;
}

std::vector<const survey_question *> question_catalog::with_role(const question_role role) const {
    std::vector<const survey_question *> out;
    for (const survey_question &q : questions_) {
        if (q.role == role) {
            out.push_back(&q);
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct line_parser {
    std::size_t line_no;
    std::string_view key;
    std::string_view value;

    [[noreturn]] void fail(const std::string &msg) const {
        throw schema_error{ fmt::format("line {}: {}", line_no, msg) };
    }

    int to_int(const std::string_view token) const {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            fail(fmt::format("'{}' is not an integer", token));
        }
        return v;
    }

    std::vector<int> int_list() const {
        std::vector<int> out;
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto sp = rest.find_first_of(" \t");
            out.push_back(to_int(rest.substr(0, sp)));
            rest = sp == std::string_view::npos ? std::string_view{} : trim(rest.substr(sp));
        }
        if (out.empty()) {
            fail(fmt::format("'{}' needs at least one code", key));
        }
        return out;
    }

    std::string_view require_value() const {
        if (value.empty()) {
            fail(fmt::format("'{}' needs a value", key));
        }
        return value;
    }
};

question_role parse_role(const line_parser &lp) {
    const std::string_view v = lp.require_value();
    for (const question_role r : { question_role::predictor, question_role::cohort_non_smoker, question_role::cohort_non_e_smoker, question_role::target }) {
        if (v == to_string(r)) {
            return r;
        }
    }
    lp.fail(fmt::format("unknown role '{}'", v));
}

answer_kind parse_kind(const line_parser &lp) {
    const std::string_view v = lp.require_value();
    for (const answer_kind k : { answer_kind::single_choice, answer_kind::multi_select, answer_kind::numeric_range }) {
        if (v == to_string(k)) {
            return k;
        }
    }
    lp.fail(fmt::format("unknown kind '{}'", v));
}

struct question_draft {
    std::size_t start_line{ 0 };
    survey_question question;
    bool has_role{ false };
    bool has_kind{ false };
    std::optional<std::pair<int, int>> range;
};

void check_codes_subset(const std::size_t line, const survey_question &q, const std::vector<int> &codes, const std::string_view what) {
    for (const int c : codes) {
        if (c == unanswered || !q.domain.contains(c)) {
            throw schema_error{ fmt::format("line {}: question {}: {} code {} is not an answer code", line, q.id, what, c) };
        }
    }
}

survey_question finish(question_draft draft) {
    survey_question &q = draft.question;
    const auto fail = [&](const std::string &msg) {
        throw schema_error{ fmt::format("line {}: question {}: {}", draft.start_line, q.id, msg) };
    };
    if (q.text.empty()) {
        fail("missing 'text'");
    }
    if (!draft.has_role) {
        fail("missing 'role'");
    }
    if (!draft.has_kind) {
        fail("missing 'kind'");
    }

    std::vector<answer_code> codes{ { unanswered, "unanswered" } };
    if (q.domain.kind == answer_kind::numeric_range) {
        if (!draft.range) {
            fail("numeric-range question needs a 'range' line");
        }
        if (q.domain.codes.size() > 0) {
            fail("numeric-range question cannot list individual codes");
        }
        const auto [lo, hi] = *draft.range;
        if (lo < 1 || hi < lo) {
            fail(fmt::format("invalid range {}..{}", lo, hi));
        }
        for (int c = lo; c <= hi; ++c) {
            codes.push_back({ c, std::to_string(c) });
        }
    } else {
        if (draft.range) {
            fail("'range' is only valid for numeric-range questions");
        }
        std::set<int> seen;
        for (answer_code &c : q.domain.codes) {
            if (c.code <= 0) {
                fail(fmt::format("answer code {} must be a positive integer (0 is reserved for unanswered)", c.code));
            }
            if (!seen.insert(c.code).second) {
                fail(fmt::format("duplicate answer code {}", c.code));
            }
            codes.push_back(std::move(c));
        }
        const std::size_t minimum = q.domain.kind == answer_kind::single_choice ? 2 : 1;
        if (seen.size() < minimum) {
            fail(fmt::format("{} question needs at least {} answer codes", to_string(q.domain.kind), minimum));
        }
    }
    q.domain.codes = std::move(codes);

    const bool cohort = q.role == question_role::cohort_non_smoker || q.role == question_role::cohort_non_e_smoker;
    if (q.role != question_role::predictor && q.domain.kind == answer_kind::multi_select) {
        fail("only predictor questions may be multi-select");
    }
    if (cohort != q.never_code.has_value()) {
        fail(cohort ? "cohort-selection question needs a 'never' code" : "'never' is only valid for cohort-selection questions");
    }
    if (q.never_code) {
        check_codes_subset(draft.start_line, q, { *q.never_code }, "never");
    }
    const bool target = q.role == question_role::target;
    if (target) {
        if (q.yes_codes.empty() || q.no_codes.empty()) {
            fail("target question needs both 'yes' and 'no' codes");
        }
        check_codes_subset(draft.start_line, q, q.yes_codes, "yes");
        check_codes_subset(draft.start_line, q, q.no_codes, "no");
        std::set<int> covered;
        for (const int c : q.yes_codes) {
            covered.insert(c);
        }
        for (const int c : q.no_codes) {
            if (!covered.insert(c).second) {
                fail(fmt::format("code {} is both yes and no", c));
            }
        }
        if (covered.size() != q.domain.answer_codes().size()) {
            fail("'yes' and 'no' codes must cover every answer code");
        }
    } else if (!q.yes_codes.empty() || !q.no_codes.empty()) {
        fail("'yes'/'no' are only valid for target questions");
    }
    return std::move(q);
}

}  // namespace

question_catalog load_catalog(const std::string_view document) {
    std::string name;
    std::string version;
    std::string profile;
    bool has_format = false;
    std::vector<survey_question> questions;
    std::optional<question_draft> draft;
    std::unordered_set<std::string> ids;

    std::size_t line_no = 0;
    std::string_view rest = document;
    while (!rest.empty() || line_no == 0) {
        ++line_no;
        const auto nl = rest.find('\n');
        const std::string_view raw = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            if (rest.empty()) {
                break;
            }
            continue;
        }
        const auto sp = line.find_first_of(" \t");
        line_parser lp{ line_no, line.substr(0, sp), sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp)) };

        if (!has_format) {
            if (lp.key != "schema-format") {
                lp.fail("document must start with 'schema-format 1'");
            }
            if (lp.to_int(lp.require_value()) != 1) {
                lp.fail(fmt::format("unsupported schema-format '{}' (supported: 1)", lp.value));
            }
            has_format = true;
            continue;
        }

        if (!draft) {
            if (lp.key == "catalog") {
                name = lp.require_value();
            } else if (lp.key == "version") {
                version = lp.require_value();
            } else if (lp.key == "profile") {
                profile = lp.require_value();
            } else if (lp.key == "question") {
                const std::string id{ lp.require_value() };
                if (!ids.insert(id).second) {
                    lp.fail(fmt::format("duplicate question id '{}'", id));
                }
                draft.emplace();
                draft->start_line = line_no;
                draft->question.id = id;
            } else {
                lp.fail(fmt::format("unexpected '{}' outside a question block", lp.key));
            }
            continue;
        }

        survey_question &q = draft->question;
        if (lp.key == "end") {
            questions.push_back(finish(std::move(*draft)));
            draft.reset();
        } else if (lp.key == "text") {
            q.text = lp.require_value();
        } else if (lp.key == "role") {
            if (draft->has_role) {
                lp.fail("question has more than one role");
            }
            q.role = parse_role(lp);
            draft->has_role = true;
        } else if (lp.key == "kind") {
            q.domain.kind = parse_kind(lp);
            draft->has_kind = true;
        } else if (lp.key == "code") {
            const std::string_view v = lp.require_value();
            const auto csp = v.find_first_of(" \t");
            if (csp == std::string_view::npos) {
                lp.fail("'code' needs a number and a label");
            }
            q.domain.codes.push_back({ lp.to_int(v.substr(0, csp)), std::string{ trim(v.substr(csp)) } });
        } else if (lp.key == "range") {
            const std::vector<int> bounds = lp.int_list();
            if (bounds.size() != 2) {
                lp.fail("'range' needs exactly two bounds");
            }
            draft->range = std::pair{ bounds[0], bounds[1] };
        } else if (lp.key == "never") {
            q.never_code = lp.to_int(lp.require_value());
        } else if (lp.key == "yes") {
            q.yes_codes = lp.int_list();
        } else if (lp.key == "no") {
            q.no_codes = lp.int_list();
        } else if (lp.key == "question") {
            lp.fail(fmt::format("question '{}' opened before '{}' was closed with 'end'", lp.value, q.id));
        } else {
            lp.fail(fmt::format("unknown key '{}'", lp.key));
        }
    }

    if (!has_format) {
        throw schema_error{ "empty document: expected 'schema-format 1'" };
    }
    if (draft) {
        throw schema_error{ fmt::format("line {}: question {} is missing 'end'", draft->start_line, draft->question.id) };
    }
    if (version.empty()) {
        throw schema_error{ "missing 'version'" };
    }

    question_catalog catalog{ std::move(name), std::move(version), std::move(profile), std::move(questions) };

    // generated column names must not collide (e.g. a question literally named Q4_1)
    std::unordered_set<std::string> columns;
    for (const survey_question &q : catalog.questions()) {
        for (const feature_column &col : columns_of(q)) {
            if (!columns.insert(col.name).second) {
                throw schema_error{ fmt::format("question {}: column name '{}' is already in use", q.id, col.name) };
            }
        }
    }

    if (catalog.profile() == nyts2018_profile) {
        const std::size_t predictors = catalog.with_role(question_role::predictor).size();
        if (predictors != nyts2018_predictor_count) {
            throw schema_error{ fmt::format("nyts2018 catalog must have {} predictor questions, found {}", nyts2018_predictor_count, predictors) };
        }
    }
    return catalog;
}

question_catalog load_catalog_file(const std::filesystem::path &path) {
    try {
        return load_catalog(read_file(path));
    } catch (const schema_error &e) {
        throw schema_error{ fmt::format("{}: {}", path.string(), e.what()) };
    }
}

std::string to_document(const question_catalog &catalog) {
    std::string out = "schema-format 1\n";
    if (!catalog.name().empty()) {
        out += fmt::format("catalog {}\n", catalog.name());
    }
    out += fmt::format("version {}\n", catalog.version());
    if (!catalog.profile().empty()) {
        out += fmt::format("profile {}\n", catalog.profile());
    }
    for (const survey_question &q : catalog.questions()) {
        out += fmt::format("\nquestion {}\n  text {}\n  role {}\n  kind {}\n", q.id, q.text, to_string(q.role), to_string(q.domain.kind));
        if (q.domain.kind == answer_kind::numeric_range) {
            const std::vector<int> codes = q.domain.answer_codes();
            out += fmt::format("  range {} {}\n", codes.front(), codes.back());
        } else {
            for (const answer_code &c : q.domain.codes) {
                if (c.code != unanswered) {
                    out += fmt::format("  code {} {}\n", c.code, c.label);
                }
            }
        }
        if (q.never_code) {
            out += fmt::format("  never {}\n", *q.never_code);
        }
        if (!q.yes_codes.empty()) {
            out += fmt::format("  yes {}\n  no {}\n", fmt::join(q.yes_codes, " "), fmt::join(q.no_codes, " "));
        }
        out += "end\n";
    }
    return out;
}

std::vector<survey_question> predictor_questions(const question_catalog &catalog) {
    std::vector<survey_question> out;
    for (const survey_question &q : catalog.questions()) {
        if (q.role == question_role::predictor) {
            out.push_back(q);
        }
    }
    return out;
}

std::vector<feature_column> columns_of(const survey_question &question) {
    if (question.domain.kind != answer_kind::multi_select) {
        std::vector<int> allowed;
        for (const answer_code &c : question.domain.codes) {
            allowed.push_back(c.code);
        }
        return { feature_column{ question.id, question.id, std::nullopt, std::move(allowed) } };
    }
    std::vector<feature_column> out;
    for (const int option : question.domain.answer_codes()) {
        out.push_back(feature_column{ fmt::format("{}_{}", question.id, option), question.id, option, { 0, 1 } });
    }
    return out;
}

std::vector<feature_column> feature_layout(const question_catalog &catalog) {
    std::vector<feature_column> out;
    for (const survey_question &q : catalog.questions()) {
        if (q.role == question_role::predictor) {
            for (feature_column &col : columns_of(q)) {
                out.push_back(std::move(col));
            }
        }
    }
    return out;
}

}  // namespace nyts::schema
