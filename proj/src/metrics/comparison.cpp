#include "nyts/metrics/comparison.hpp"

#include "nyts/csv.hpp"         // nyts::csv::parse, nyts::csv::format_row
#include "nyts/exceptions.hpp"  // nyts::input_error, nyts::validation_error

#include "fmt/format.h"  // fmt::format

#include <algorithm>     // std::max
#include <charconv>      // std::from_chars
#include <system_error>  // std::errc

namespace nyts::metrics {

comparison_table compare_models(const ingest::dataset &data, const ingest::split_spec &split, const std::span<const ml::model_spec> specs, const cv_config &cv) {
    if (specs.empty()) {
        throw validation_error{ "compare_models needs at least one model spec" };
    }
    const auto [train, test] = ingest::train_test_split(data, split);
    comparison_table table;
    table.train_rows = train.size();
    table.test_rows = test.size();
    for (const ml::model_spec &spec : specs) {
        comparison_row row;
        row.kind = spec.kind;
        const cv_result cvr = cross_validate(spec, train, cv);
        row.fold_scores = cvr.fold_scores;
        row.training_score = cvr.mean;
        const ml::classifier_model model = ml::train_model(train, spec);
        const std::vector<int> predicted = ml::predict_labels(model, test.features);
        row.test_report = report(test.labels, predicted, std::vector<int>{ 0, 1 });
        row.test_score = row.test_report.accuracy;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string render_comparison(const comparison_table &table) {
    std::vector<std::size_t> widths;
    for (const comparison_row &row : table.rows) {
        widths.push_back(std::max<std::size_t>(display_name(row.kind).size(), 6));
    }
    constexpr std::size_t label_width = 14;  // "Training Score"
    std::string out = fmt::format("{:<{}}", "", label_width);
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        out += fmt::format("  {:>{}}", display_name(table.rows[k].kind), widths[k]);
    }
    out += '\n';
    const auto score_line = [&](const std::string_view name, auto member) {
        std::string line = fmt::format("{:<{}}", name, label_width);
        for (std::size_t k = 0; k < table.rows.size(); ++k) {
            line += fmt::format("  {:>{}.4f}", table.rows[k].*member, widths[k]);
        }
        return line + '\n';
    };
    out += score_line("Training Score", &comparison_row::training_score);
    out += score_line("Test Score", &comparison_row::test_score);
    return out;
}

std::string comparison_csv(const comparison_table &table) {
    std::string out = csv::format_row({ "model", "name", "training_score", "test_score" });
    for (const comparison_row &row : table.rows) {
        out += csv::format_row({ std::string{ to_string(row.kind) }, std::string{ display_name(row.kind) }, fmt::format("{}", row.training_score), fmt::format("{}", row.test_score) });
    }
    return out;
}

namespace {

double parse_score(const std::string &field, const std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !(value >= 0.0 && value <= 1.0)) {
        throw input_error{ fmt::format("line {}: '{}' is not a score in [0, 1]", line, field) };
    }
    return value;
}

}  // namespace

std::vector<comparison_point> parse_comparison_csv(const std::string_view text) {
    const std::vector<csv::record> records = csv::parse(text);
    if (records.empty() || records.front().fields != std::vector<std::string>{ "model", "name", "training_score", "test_score" }) {
        throw input_error{ "comparison file must start with the header model,name,training_score,test_score" };
    }
    std::vector<comparison_point> points;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const csv::record &rec = records[r];
        if (rec.fields.size() != 4) {
            throw input_error{ fmt::format("line {}: expected 4 fields, found {}", rec.line, rec.fields.size()) };
        }
        points.push_back({ rec.fields[0], rec.fields[1], parse_score(rec.fields[2], rec.line), parse_score(rec.fields[3], rec.line) });
    }
    return points;
}

std::string comparison_svg(const std::span<const comparison_point> points, const std::string_view title) {
    constexpr double group_width = 140.0;
    constexpr double bar_width = 48.0;
    constexpr double plot_height = 300.0;
    constexpr double left = 60.0;
    constexpr double top = 50.0;
    const double width = left + group_width * static_cast<double>(points.size()) + 40.0;
    const double height = top + plot_height + 90.0;
    const double base = top + plot_height;

    std::string svg = fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" font-family="sans-serif" font-size="12">)"
                                  "\n",
                                  width, height);
    svg += fmt::format(R"(<text x="{:.1f}" y="25" text-anchor="middle" font-size="16">{}</text>)"
                       "\n",
                       width / 2.0, title);
    for (int tick = 0; tick <= 10; tick += 2) {
        const double y = base - plot_height * tick / 10.0;
        svg += fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="#ddd"/>)"
                           "\n",
                           left, y, width - 20.0, y);
        svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="end">{:.1f}</text>)"
                           "\n",
                           left - 6.0, y + 4.0, tick / 10.0);
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        const comparison_point &p = points[k];
        const double x0 = left + group_width * static_cast<double>(k) + (group_width - 2.0 * bar_width) / 2.0;
        const double scores[2] = { p.training_score, p.test_score };
        const char *colors[2] = { "#4c72b0", "#dd8452" };
        for (int b = 0; b < 2; ++b) {
            const double h = plot_height * scores[b];
            const double x = x0 + bar_width * b;
            svg += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="{}"/>)"
                               "\n",
                               x, base - h, bar_width - 2.0, h, colors[b]);
            svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle" font-size="10">{:.4f}</text>)"
                               "\n",
                               x + bar_width / 2.0 - 1.0, base - h - 4.0, scores[b]);
        }
        svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">{}</text>)"
                           "\n",
                           x0 + bar_width, base + 18.0, p.name);
    }
    svg += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="12" height="12" fill="#4c72b0"/><text x="{:.1f}" y="{:.1f}">Training Score</text>)"
                       "\n",
                       left, base + 40.0, left + 18.0, base + 50.0);
    svg += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="12" height="12" fill="#dd8452"/><text x="{:.1f}" y="{:.1f}">Test Score</text>)"
                       "\n",
                       left + 140.0, base + 40.0, left + 158.0, base + 50.0);
    svg += "</svg>\n";
    return svg;
}

}  // namespace nyts::metrics
