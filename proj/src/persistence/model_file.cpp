#include "nyts/persistence/model_file.hpp"

#include "nyts/checksum.hpp"    // nyts::sha256_hex, nyts::read_file, nyts::write_file_atomic
#include "nyts/exceptions.hpp"  // nyts::model_format_error, nyts::checksum_error, nyts::version_error

#include "fmt/format.h"  // fmt::format

#include <cerrno>       // errno, ERANGE
#include <charconv>     // std::from_chars
#include <cstdlib>      // std::strtod
#include <map>          // std::map
#include <sstream>      // std::istringstream
#include <type_traits>  // std::is_same_v, std::decay_t

namespace nyts::persist {

namespace {

constexpr std::string_view checksum_prefix = "checksum sha256 ";

std::string index_key(const std::string_view prefix, const std::size_t i, const std::string_view suffix = {}) {
    return fmt::format("{}.{:06}{}", prefix, i, suffix);
}

// Percent-encodes the three bytes that would break the line structure.
std::string escape_value(const std::string_view value) {
    std::string out;
    for (const char c : value) {
        switch (c) {
            case '%':
                out += "%25";
                break;
            case '\n':
                out += "%0A";
                break;
            case '\r':
                out += "%0D";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string unescape_value(const std::string_view value, const std::string &key) {
    std::string out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (value[i] != '%') {
            out += value[i];
            continue;
        }
        const std::string_view code = value.substr(i + 1, 2);
        if (code == "25") {
            out += '%';
        } else if (code == "0A") {
            out += '\n';
        } else if (code == "0D") {
            out += '\r';
        } else {
            throw model_format_error{ key, fmt::format("{}: invalid escape sequence", key) };
        }
        i += 2;
    }
    return out;
}

std::string hex(const double v) {
    return fmt::format("{:a}", v);
}

std::string hex_list(const std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i == 0 ? "" : " ") + hex(values[i]);
    }
    return out;
}

template <typename T>
std::string int_list(const std::span<const T> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += fmt::format("{}{}", i == 0 ? "" : " ", values[i]);
    }
    return out;
}

class writer {
  public:
    void put(std::string key, const std::string_view value) { entries_.emplace(std::move(key), escape_value(value)); }

    void put_tree(const std::string &prefix, const ml::decision_tree &tree) {
        put(prefix + ".node_count", fmt::format("{}", tree.nodes.size()));
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const ml::tree_node &n = tree.nodes[i];
            std::string record;
            if (n.is_leaf) {
                record = fmt::format("leaf {} {} {}", n.label, hex(n.value), n.samples);
            } else {
                record = fmt::format("split {} {} {} {}", n.feature, hex(n.score), n.samples, n.fallback);
                for (const auto &[code, child] : n.children) {
                    record += fmt::format(" {}:{}", code, child);
                }
            }
            put(index_key(prefix + ".node", i), record);
        }
    }

    [[nodiscard]] std::string finish() const {
        std::string body = fmt::format("{} {}\n", magic, format_version);
        for (const auto &[key, value] : entries_) {
            body += key;
            body += ' ';
            body += value;
            body += '\n';
        }
        return body + std::string{ checksum_prefix } + sha256_hex(body) + "\n";
    }

  private:
    std::map<std::string, std::string> entries_;
};

class reader {
  public:
    explicit reader(std::map<std::string, std::string> entries) :
        entries_{ std::move(entries) } {}

    std::string take(const std::string &key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw model_format_error{ key, fmt::format("missing key '{}'", key) };
        }
        std::string value = unescape_value(it->second, key);
        entries_.erase(it);
        return value;
    }

    template <typename T>
    T take_integer(const std::string &key) {
        return parse_integer<T>(take(key), key);
    }

    double take_real(const std::string &key) { return parse_real(take(key), key); }

    bool take_bool(const std::string &key) {
        const std::string v = take(key);
        if (v == "true") {
            return true;
        }
        if (v == "false") {
            return false;
        }
        throw model_format_error{ key, fmt::format("{}: expected true or false, found '{}'", key, v) };
    }

    std::vector<double> take_reals(const std::string &key) {
        std::vector<double> out;
        for (const std::string &token : split(take(key))) {
            out.push_back(parse_real(token, key));
        }
        return out;
    }

    template <typename T>
    std::vector<T> take_integers(const std::string &key) {
        std::vector<T> out;
        for (const std::string &token : split(take(key))) {
            out.push_back(parse_integer<T>(token, key));
        }
        return out;
    }

    ml::decision_tree take_tree(const std::string &prefix, const std::size_t arity) {
        const std::string count_key = prefix + ".node_count";
        const auto count = take_integer<std::size_t>(count_key);
        if (count == 0) {
            throw model_format_error{ count_key, fmt::format("{}: a tree needs at least one node", count_key) };
        }
        ml::decision_tree tree;
        for (std::size_t i = 0; i < count; ++i) {
            const std::string key = index_key(prefix + ".node", i);
            const std::vector<std::string> tokens = split(take(key));
            ml::tree_node node;
            const auto bad = [&](const std::string_view why) { return model_format_error{ key, fmt::format("{}: {}", key, why) }; };
            if (!tokens.empty() && tokens[0] == "leaf" && tokens.size() == 4) {
                node.label = parse_integer<int>(tokens[1], key);
                node.value = parse_real(tokens[2], key);
                node.samples = parse_integer<std::uint32_t>(tokens[3], key);
            } else if (!tokens.empty() && tokens[0] == "split" && tokens.size() >= 5) {
                node.is_leaf = false;
                node.feature = parse_integer<std::uint32_t>(tokens[1], key);
                node.score = parse_real(tokens[2], key);
                node.samples = parse_integer<std::uint32_t>(tokens[3], key);
                node.fallback = parse_integer<std::uint32_t>(tokens[4], key);
                for (std::size_t t = 5; t < tokens.size(); ++t) {
                    const std::size_t colon = tokens[t].find(':');
                    if (colon == std::string::npos) {
                        throw bad("child entries are written code:index");
                    }
                    node.children.emplace_back(parse_integer<int>(tokens[t].substr(0, colon), key), parse_integer<std::uint32_t>(tokens[t].substr(colon + 1), key));
                }
                if (node.feature >= arity) {
                    throw bad(fmt::format("feature {} is outside the model's {} features", node.feature, arity));
                }
                if (node.children.size() < 2) {
                    throw bad("an internal node needs at least two children");
                }
                for (std::size_t c = 0; c < node.children.size(); ++c) {
                    if (c > 0 && node.children[c - 1].first >= node.children[c].first) {
                        throw bad("child codes must be strictly ascending");
                    }
                }
                // children point forward, which rules out cycles
                const auto valid_child = [&](const std::uint32_t idx) { return idx > i && idx < count; };
                if (!valid_child(node.fallback)) {
                    throw bad("fallback index out of range");
                }
                for (const auto &[code, child] : node.children) {
                    if (!valid_child(child)) {
                        throw bad(fmt::format("child index {} out of range", child));
                    }
                }
            } else {
                throw bad("expected a 'leaf' or 'split' record");
            }
            tree.nodes.push_back(std::move(node));
        }
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint32_t fb = tree.nodes[i].fallback;
            if (fb != ml::no_node && !tree.nodes[fb].is_leaf) {
                const std::string key = index_key(prefix + ".node", i);
                throw model_format_error{ key, fmt::format("{}: fallback must be a leaf", key) };
            }
        }
        return tree;
    }

    std::vector<std::string> remaining_keys_with_prefix(const std::string_view prefix) const {
        std::vector<std::string> keys;
        for (const auto &[key, value] : entries_) {
            if (key.starts_with(prefix)) {
                keys.push_back(key);
            }
        }
        return keys;
    }

    void expect_empty() const {
        if (!entries_.empty()) {
            const std::string &key = entries_.begin()->first;
            throw model_format_error{ key, fmt::format("unexpected key '{}' for this model kind", key) };
        }
    }

  private:
    static std::vector<std::string> split(const std::string &text) {
        std::vector<std::string> out;
        std::istringstream in{ text };
        std::string token;
        while (in >> token) {
            out.push_back(token);
        }
        return out;
    }

    template <typename T>
    static T parse_integer(const std::string_view text, const std::string &key) {
        T value{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
            throw model_format_error{ key, fmt::format("{}: '{}' is not a valid integer", key, text) };
        }
        return value;
    }

    static double parse_real(const std::string &text, const std::string &key) {
        if (text.empty()) {
            throw model_format_error{ key, fmt::format("{}: empty real", key) };
        }
        char *end = nullptr;
        errno = 0;
        const double value = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || (errno == ERANGE && value != 0.0)) {
            throw model_format_error{ key, fmt::format("{}: '{}' is not a valid real", key, text) };
        }
        return value;
    }

    std::map<std::string, std::string> entries_;
};

void put_fit(writer &w, const ml::weight_vector &weights, const ml::fit_report &report) {
    w.put("weights", hex_list(weights.values));
    w.put("fit.iterations", fmt::format("{}", report.iterations));
    w.put("fit.final_loss", hex(report.final_loss));
    w.put("fit.converged", report.converged ? "true" : "false");
    w.put("fit.separated", report.separated ? "true" : "false");
}

template <typename Model>
Model take_fit(reader &r, const std::size_t arity) {
    Model m;
    m.weights.values = r.take_reals("weights");
    if (m.weights.values.size() != arity + 1) {
        throw model_format_error{ "weights", fmt::format("weights: expected {} values (intercept + {} features), found {}", arity + 1, arity, m.weights.values.size()) };
    }
    m.report.iterations = r.take_integer<std::size_t>("fit.iterations");
    m.report.final_loss = r.take_real("fit.final_loss");
    m.report.converged = r.take_bool("fit.converged");
    m.report.separated = r.take_bool("fit.separated");
    return m;
}

// Splits `bytes` into the checked payload and verifies the trailing checksum line.
std::string_view verified_payload(const std::string_view bytes, std::string &digest) {
    const auto corrupt = [](const std::string_view why) { return checksum_error{ "checksum", fmt::format("checksum: {}", why) }; };
    if (bytes.empty() || bytes.back() != '\n') {
        throw corrupt("file does not end with a checksum line");
    }
    const std::string_view without_newline = bytes.substr(0, bytes.size() - 1);
    const std::size_t line_start = without_newline.rfind('\n') == std::string_view::npos ? 0 : without_newline.rfind('\n') + 1;
    const std::string_view line = without_newline.substr(line_start);
    if (!line.starts_with(checksum_prefix)) {
        throw corrupt("missing or malformed checksum line");
    }
    digest = std::string{ line.substr(checksum_prefix.size()) };
    if (digest.size() != 64 || digest.find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw corrupt("malformed sha256 digest");
    }
    const std::string_view payload = bytes.substr(0, line_start);
    const std::string actual = sha256_hex(payload);
    if (actual != digest) {
        throw corrupt(fmt::format("payload hashes to {} but the file records {}", actual, digest));
    }
    return payload;
}

}  // namespace

std::string save(const ml::classifier_model &model) {
    writer w;
    const ml::model_metadata &meta = model.metadata;
    w.put("kind", to_string(model.kind()));
    w.put("meta.catalog_version", meta.catalog_version);
    w.put("meta.created", meta.created);
    w.put("meta.seed", fmt::format("{}", meta.seed));
    w.put("meta.feature_count", fmt::format("{}", meta.feature_names.size()));
    w.put("meta.has_domains", meta.feature_domains.empty() ? "false" : "true");
    if (!meta.feature_domains.empty() && meta.feature_domains.size() != meta.feature_names.size()) {
        throw model_format_error{ "meta.has_domains", "feature_domains must have one entry per feature" };
    }
    for (std::size_t j = 0; j < meta.feature_names.size(); ++j) {
        w.put(index_key("meta.feature", j, ".name"), meta.feature_names[j]);
        if (!meta.feature_domains.empty()) {
            w.put(index_key("meta.feature", j, ".domain"), int_list<int>(meta.feature_domains[j]));
        }
    }
    for (const auto &[key, value] : meta.hyperparameters) {
        if (key.empty() || key.find_first_of(" \t\r\n") != std::string::npos) {
            throw model_format_error{ "hyper." + key, fmt::format("hyperparameter key '{}' must be non-empty without whitespace", key) };
        }
        w.put("hyper." + key, value);
    }

    std::visit(
        [&](const auto &params) {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, ml::linear_threshold_model> || std::is_same_v<T, ml::logistic_model>) {
                put_fit(w, params.weights, params.report);
            } else if constexpr (std::is_same_v<T, ml::gaussian_nb_model>) {
                w.put("nb.classes", int_list<int>(params.classes));
                w.put("nb.priors", hex_list(params.priors));
                w.put("nb.means", hex_list(params.means.data()));
                w.put("nb.variances", hex_list(params.variances.data()));
                w.put("nb.variance_floor", hex(params.variance_floor));
            } else if constexpr (std::is_same_v<T, ml::decision_tree>) {
                w.put_tree("tree", params);
            } else if constexpr (std::is_same_v<T, ml::forest_model>) {
                w.put("forest.max_features", fmt::format("{}", params.max_features));
                w.put("forest.tree_count", fmt::format("{}", params.trees.size()));
                for (std::size_t t = 0; t < params.trees.size(); ++t) {
                    const std::string prefix = index_key("forest.tree", t);
                    w.put(prefix + ".seed", fmt::format("{}", params.tree_seeds[t]));
                    w.put(prefix + ".features", int_list<std::size_t>(params.tree_features[t]));
                    w.put_tree(prefix, params.trees[t]);
                }
            } else {
                w.put("gb.initial_score", hex(params.initial_score));
                w.put("gb.shrinkage", hex(params.shrinkage));
                w.put("gb.training_loss", hex_list(params.training_loss));
                w.put("gb.stage_count", fmt::format("{}", params.stages.size()));
                for (std::size_t s = 0; s < params.stages.size(); ++s) {
                    w.put_tree(index_key("gb.stage", s), params.stages[s]);
                }
            }
        },
        model.parameters);
    return w.finish();
}

std::string model_id(const std::string_view bytes) {
    std::string digest;
    (void) verified_payload(bytes, digest);
    return digest;
}

ml::classifier_model load(const std::string_view bytes) {
    std::string digest;
    const std::string_view payload = verified_payload(bytes, digest);

    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < payload.size();) {
        const std::size_t end = payload.find('\n', pos);
        lines.push_back(payload.substr(pos, end - pos));
        pos = end + 1;
    }
    if (lines.empty()) {
        throw model_format_error{ "magic", "empty model file" };
    }
    const std::string_view header = lines.front();
    if (!header.starts_with(magic) || header.size() <= magic.size() || header[magic.size()] != ' ') {
        throw model_format_error{ "magic", fmt::format("not a model file: header must start with '{} '", magic) };
    }
    const std::string_view version = header.substr(magic.size() + 1);
    if (version != fmt::format("{}", format_version)) {
        throw version_error{ "format_version", fmt::format("unsupported format version '{}' (supported: {})", version, format_version) };
    }

    std::map<std::string, std::string> entries;
    std::string previous;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t space = lines[i].find(' ');
        if (space == std::string_view::npos || space == 0) {
            throw model_format_error{ fmt::format("line {}", i + 1), fmt::format("line {}: expected 'key value'", i + 1) };
        }
        std::string key{ lines[i].substr(0, space) };
        if (i > 1 && key <= previous) {
            throw model_format_error{ key, fmt::format("key '{}' is duplicated or out of order", key) };
        }
        previous = key;
        entries.emplace(std::move(key), std::string{ lines[i].substr(space + 1) });
    }

    reader r{ std::move(entries) };
    ml::classifier_model model;
    ml::model_metadata &meta = model.metadata;
    const ml::model_kind kind = [&] {
        const std::string name = r.take("kind");
        try {
            return ml::parse_model_kind(name);
        } catch (const input_error &) {
            throw model_format_error{ "kind", fmt::format("kind: unknown model kind '{}'", name) };
        }
    }();
    meta.catalog_version = r.take("meta.catalog_version");
    meta.created = r.take("meta.created");
    meta.seed = r.take_integer<std::uint64_t>("meta.seed");
    const auto arity = r.take_integer<std::size_t>("meta.feature_count");
    const bool has_domains = r.take_bool("meta.has_domains");
    for (std::size_t j = 0; j < arity; ++j) {
        meta.feature_names.push_back(r.take(index_key("meta.feature", j, ".name")));
        if (has_domains) {
            meta.feature_domains.push_back(r.take_integers<int>(index_key("meta.feature", j, ".domain")));
        }
    }
    for (const std::string &key : r.remaining_keys_with_prefix("hyper.")) {
        meta.hyperparameters.emplace(key.substr(6), r.take(key));
    }

    switch (kind) {
        case ml::model_kind::linear:
            model.parameters = take_fit<ml::linear_threshold_model>(r, arity);
            break;
        case ml::model_kind::logistic:
            model.parameters = take_fit<ml::logistic_model>(r, arity);
            break;
        case ml::model_kind::nb: {
            ml::gaussian_nb_model nb;
            nb.classes = r.take_integers<int>("nb.classes");
            nb.priors = r.take_reals("nb.priors");
            const std::size_t k = nb.classes.size();
            if (k == 0 || nb.priors.size() != k) {
                throw model_format_error{ "nb.priors", "nb.priors: expected one prior per class" };
            }
            const auto table = [&](const std::string &key) {
                std::vector<double> values = r.take_reals(key);
                if (values.size() != k * arity) {
                    throw model_format_error{ key, fmt::format("{}: expected {} values ({} classes x {} features), found {}", key, k * arity, k, arity, values.size()) };
                }
                real_matrix m{ k, arity };
                m.data() = std::move(values);
                return m;
            };
            nb.means = table("nb.means");
            nb.variances = table("nb.variances");
            nb.variance_floor = r.take_real("nb.variance_floor");
            for (const double v : nb.variances.data()) {
                if (!(v > 0.0)) {
                    throw model_format_error{ "nb.variances", "nb.variances: every variance must be positive" };
                }
            }
            model.parameters = std::move(nb);
            break;
        }
        case ml::model_kind::tree:
            model.parameters = r.take_tree("tree", arity);
            break;
        case ml::model_kind::forest: {
            ml::forest_model forest;
            forest.max_features = r.take_integer<std::size_t>("forest.max_features");
            const auto count = r.take_integer<std::size_t>("forest.tree_count");
            if (count == 0) {
                throw model_format_error{ "forest.tree_count", "forest.tree_count: a forest needs at least one tree" };
            }
            for (std::size_t t = 0; t < count; ++t) {
                const std::string prefix = index_key("forest.tree", t);
                forest.tree_seeds.push_back(r.take_integer<std::uint64_t>(prefix + ".seed"));
                forest.tree_features.push_back(r.take_integers<std::size_t>(prefix + ".features"));
                forest.trees.push_back(r.take_tree(prefix, arity));
            }
            model.parameters = std::move(forest);
            break;
        }
        case ml::model_kind::gb: {
            ml::gbm_model gbm;
            gbm.initial_score = r.take_real("gb.initial_score");
            gbm.shrinkage = r.take_real("gb.shrinkage");
            if (!(gbm.shrinkage > 0.0 && gbm.shrinkage <= 1.0)) {
                throw model_format_error{ "gb.shrinkage", "gb.shrinkage: must lie in (0, 1]" };
            }
            gbm.training_loss = r.take_reals("gb.training_loss");
            const auto count = r.take_integer<std::size_t>("gb.stage_count");
            for (std::size_t s = 0; s < count; ++s) {
                gbm.stages.push_back(r.take_tree(index_key("gb.stage", s), arity));
            }
            model.parameters = std::move(gbm);
            break;
        }
    }
    r.expect_empty();
    return model;
}

std::string save_file(const ml::classifier_model &model, const std::filesystem::path &path) {
    const std::string bytes = save(model);
    write_file_atomic(path, bytes);
    return model_id(bytes);
}

loaded_model load_file(const std::filesystem::path &path) {
    const std::string bytes = read_file(path);
    loaded_model out{ load(bytes), model_id(bytes) };
    return out;
}

}  // namespace nyts::persist
