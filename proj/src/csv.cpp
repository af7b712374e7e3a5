#include "nyts/csv.hpp"

#include "nyts/exceptions.hpp"  // nyts::input_error

#include "fmt/format.h"  // fmt::format

namespace nyts::csv {

std::vector<record> parse(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }

    std::vector<record> records;
    record current;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;
    current.line = 1;

    const auto end_field = [&]() {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    const auto end_record = [&]() {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields.front().empty();
        if (!blank) {
            records.push_back(std::move(current));
        }
        current = record{};
        current.line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw input_error{ fmt::format("line {}: stray quote inside unquoted field", line) };
                }
                in_quotes = true;
                field_was_quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    break;
                }
                [[fallthrough]];
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field.push_back(c);
        }
    }
    if (in_quotes) {
        throw input_error{ fmt::format("line {}: unterminated quoted field", current.line) };
    }
    if (!field.empty() || !current.fields.empty() || field_was_quoted) {
        end_record();
    }
    return records;
}

std::string escape(const std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string{ field };
    }
    std::string out{ "\"" };
    for (const char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string> &fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace nyts::csv
