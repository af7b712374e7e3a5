#include "nyts/ingest/dataset.hpp"

#include "nyts/csv.hpp"         // nyts::csv::parse, nyts::csv::format_row
#include "nyts/exceptions.hpp"  // nyts::input_error

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::count
#include <charconv>   // std::from_chars

namespace nyts::ingest {

std::size_t dataset::count_label(const int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

dataset dataset::subset(const std::span<const std::size_t> indices) const {
    dataset out;
    out.feature_names = feature_names;
    out.features = features.select_rows(indices);
    if (indices.empty()) {
        out.features = code_matrix{ 0, feature_names.size() };
    }
    out.labels.reserve(indices.size());
    out.row_ids.reserve(indices.size());
    for (const std::size_t i : indices) {
        out.labels.push_back(labels[i]);
        out.row_ids.push_back(row_ids[i]);
    }
    return out;
}

std::string to_prepared_csv(const dataset &ds) {
    std::vector<std::string> fields = ds.feature_names;
    fields.emplace_back(label_column);
    std::string out = csv::format_row(fields);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto row = ds.features.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += std::to_string(row[c]);
            out.push_back(',');
        }
        out += std::to_string(ds.labels[r]);
        out.push_back('\n');
    }
    return out;
}

dataset read_prepared_csv(const std::string_view text) {
    const std::vector<csv::record> records = csv::parse(text);
    if (records.empty()) {
        throw input_error{ "prepared CSV: missing header row" };
    }
    const std::vector<std::string> &header = records.front().fields;
    if (header.empty() || header.back() != label_column) {
        throw input_error{ fmt::format("prepared CSV: last column must be '{}'", label_column) };
    }
    dataset ds;
    ds.feature_names.assign(header.begin(), header.end() - 1);
    const std::size_t d = ds.feature_names.size();
    ds.features = code_matrix{ 0, d };

    std::vector<int> row(d);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const csv::record &rec = records[r];
        if (rec.fields.size() != header.size()) {
            throw input_error{ fmt::format("prepared CSV line {}: expected {} fields, found {}", rec.line, header.size(), rec.fields.size()) };
        }
        for (std::size_t c = 0; c <= d; ++c) {
            const std::string &f = rec.fields[c];
            int v = 0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size() || v < 0) {
                throw input_error{ fmt::format("prepared CSV line {}, column '{}': '{}' is not a non-negative integer", rec.line, header[c], f) };
            }
            if (c < d) {
                row[c] = v;
            } else if (v != 0 && v != 1) {
                throw input_error{ fmt::format("prepared CSV line {}: label must be 0 or 1, found {}", rec.line, v) };
            } else {
                ds.labels.push_back(v);
            }
        }
        if (d > 0) {
            ds.features.append_row(row);
        } else {
            ds.features = code_matrix{ ds.features.rows() + 1, 0 };
        }
        ds.row_ids.push_back(r - 1);
    }
    return ds;
}

}  // namespace nyts::ingest
