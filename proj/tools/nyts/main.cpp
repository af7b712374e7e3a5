// nyts: command-line driver for the survey pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 input or data error, 3 internal error.

#include "nyts/checksum.hpp"
#include "nyts/exceptions.hpp"
#include "nyts/ingest/dataset.hpp"
#include "nyts/ingest/prepare.hpp"
#include "nyts/ingest/raw_table.hpp"
#include "nyts/ingest/split.hpp"
#include "nyts/ingest/synthetic.hpp"
#include "nyts/metrics/comparison.hpp"
#include "nyts/metrics/report.hpp"
#include "nyts/ml/classifier.hpp"
#include "nyts/persistence/model_file.hpp"
#include "nyts/schema/catalog.hpp"
#include "nyts/service/service.hpp"

#include "CLI11.hpp"
#include "fmt/format.h"
#include "fmt/ranges.h"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_input = 2;
constexpr int exit_internal = 3;

std::string default_catalog() {
#ifdef NYTS_DEFAULT_CATALOG
    return NYTS_DEFAULT_CATALOG;
#else
    return "";
#endif
}

/// Collects what a run needs to be reproduced and writes it next to its outputs.
class run_manifest {
  public:
    explicit run_manifest(std::string command) :
        start_{ std::chrono::steady_clock::now() } {
        doc_["command"] = std::move(command);
        doc_["config"] = json::object();
        doc_["seeds"] = json::object();
        doc_["inputs"] = json::object();
        doc_["outputs"] = json::object();
        doc_["timings_ms"] = json::object();
    }

    template <typename T>
    void config(const std::string &key, const T &value) { doc_["config"][key] = value; }

    void seed(const std::string &key, const std::uint64_t value) { doc_["seeds"][key] = value; }

    void input(const fs::path &path) { doc_["inputs"][path.string()] = nyts::sha256_file(path); }

    void output(const fs::path &path) { doc_["outputs"][path.string()] = nyts::sha256_file(path); }

    void phase(const std::string &name) {
        const auto now = std::chrono::steady_clock::now();
        doc_["timings_ms"][name] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }

    void write(const fs::path &path) {
        doc_["timings_ms"]["total"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        nyts::write_file_atomic(path, doc_.dump(2) + "\n");
    }

  private:
    json doc_;
    std::chrono::steady_clock::time_point start_;
    std::chrono::steady_clock::time_point last_{ std::chrono::steady_clock::now() };
};

fs::path manifest_path(const std::string &flag, const fs::path &out) {
    return flag.empty() ? fs::path{ out.string() + ".manifest.json" } : fs::path{ flag };
}

// Creation stamp: explicit flag, else SOURCE_DATE_EPOCH, else "unspecified" so reruns stay byte-identical.
std::string creation_stamp(const std::string &flag) {
    if (!flag.empty()) {
        return flag;
    }
    const char *epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (epoch == nullptr || *epoch == '\0') {
        return "unspecified";
    }
    char *end = nullptr;
    const long long seconds = std::strtoll(epoch, &end, 10);
    if (*end != '\0') {
        throw nyts::input_error{ fmt::format("SOURCE_DATE_EPOCH '{}' is not an integer", epoch) };
    }
    const std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- prepare ---------------------------------------------------------------

struct prepare_options {
    std::string input;
    std::string catalog = default_catalog();
    std::string policy = "q16-only";
    bool cohort_q59 = false;
    bool cohort_q28 = false;
    std::string out;
    std::string report;
    std::string manifest;
};

int run_prepare(const prepare_options &o) {
    run_manifest manifest{ "prepare" };
    const nyts::schema::question_catalog catalog = nyts::schema::load_catalog_file(o.catalog);
    const nyts::ingest::target_policy policy = nyts::ingest::parse_target_policy(o.policy);

    nyts::ingest::raw_table raw = nyts::ingest::parse_csv(nyts::read_file(o.input), catalog);
    manifest.phase("parse");
    const std::size_t input_rows = raw.rows.size();
    const std::size_t nulls = raw.null_count();
    const std::vector<std::string> unknown = raw.unknown_columns();
    raw = nyts::ingest::impute_nulls(std::move(raw));

    nyts::ingest::cohort_config cohort;
    if (o.cohort_q59) {
        cohort.disabled.erase("Q59");
    }
    cohort.non_e_smoker = o.cohort_q28;
    const nyts::ingest::cohort_result filtered = nyts::ingest::filter_never_smokers(raw, catalog, cohort);
    const nyts::ingest::target_result target = nyts::ingest::derive_target(filtered.table, catalog, policy);
    manifest.phase("prepare");

    nyts::write_file_atomic(o.out, nyts::ingest::to_prepared_csv(target.data));

    json report;
    report["input_rows"] = input_rows;
    report["input_columns"] = raw.columns.size();
    report["unknown_columns"] = unknown;
    report["nulls_imputed"] = nulls;
    json failed = json::object();
    for (const auto &[id, count] : filtered.summary.failed_by_question) {
        failed[id] = count;
    }
    report["cohort"] = { { "questions", filtered.summary.questions }, { "rows_in", filtered.summary.rows_in }, { "rows_out", filtered.summary.rows_out }, { "failed_by_question", failed } };
    report["target"] = {
        { "policy", nyts::ingest::to_string(policy) },
        { "rows_in", target.summary.rows_in },
        { "dropped_undefined", target.summary.dropped_undefined },
        { "rows_out", target.summary.rows_out },
        { "positives", target.summary.positives },
        { "negatives", target.summary.negatives },
        { "absent_feature_columns", target.summary.absent_feature_columns },
    };
    report["features"] = target.data.feature_count();
    report["catalog_version"] = catalog.version();
    const fs::path report_path = o.report.empty() ? fs::path{ o.out + ".report.json" } : fs::path{ o.report };
    nyts::write_file_atomic(report_path, report.dump(2) + "\n");

    fmt::print("input rows:           {}\n", input_rows);
    fmt::print("nulls imputed as 0:   {}\n", nulls);
    fmt::print("never-smoker cohort:  {} ({})\n", filtered.summary.rows_out, fmt::join(filtered.summary.questions, ", "));
    fmt::print("undefined target:     {} dropped\n", target.summary.dropped_undefined);
    fmt::print("prepared rows:        {} ({} yes, {} no)\n", target.summary.rows_out, target.summary.positives, target.summary.negatives);
    fmt::print("features:             {}\n", target.data.feature_count());
    if (!unknown.empty()) {
        fmt::print("ignored columns:      {}\n", unknown.size());
    }

    manifest.config("input", o.input);
    manifest.config("catalog", o.catalog);
    manifest.config("catalog_version", catalog.version());
    manifest.config("target_policy", o.policy);
    manifest.config("cohort_q59", o.cohort_q59);
    manifest.config("cohort_q28", o.cohort_q28);
    manifest.input(o.input);
    manifest.input(o.catalog);
    manifest.output(o.out);
    manifest.output(report_path);
    manifest.write(manifest_path(o.manifest, o.out));
    return 0;
}

// ---- model options shared by train and compare ------------------------------

struct model_options {
    std::optional<double> learning_rate;
    std::optional<double> tolerance;
    std::optional<std::size_t> max_iters;
    std::optional<double> l2;
    bool no_standardize = false;
    std::optional<std::size_t> max_depth;
    std::optional<std::size_t> min_samples;
    std::optional<std::size_t> n_trees;
    std::optional<std::size_t> max_features;
    bool no_bootstrap = false;
    std::optional<std::size_t> n_stages;
    std::optional<double> shrinkage;

    void add_to(CLI::App &cmd) {
        cmd.add_option("--learning-rate", learning_rate, "Gradient-descent step size (linear, logistic)");
        cmd.add_option("--tolerance", tolerance, "Stop when the weight step norm falls below this");
        cmd.add_option("--max-iters", max_iters, "Gradient-descent iteration cap");
        cmd.add_option("--l2", l2, "L2 penalty on non-intercept weights");
        cmd.add_flag("--no-standardize", no_standardize, "Fit linear/logistic on raw codes");
        cmd.add_option("--max-depth", max_depth, "Tree depth cap, 0 = unlimited (defaults: tree 10, forest 0, gb 3)");
        cmd.add_option("--min-samples", min_samples, "Smallest node that may still split (defaults: tree/forest 2, gb 10)");
        cmd.add_option("--n-trees", n_trees, "Forest size");
        cmd.add_option("--max-features", max_features, "Features per forest tree, 0 = ceil(sqrt(d))");
        cmd.add_flag("--no-bootstrap", no_bootstrap, "Train every forest tree on all rows");
        cmd.add_option("--n-stages", n_stages, "Boosting stages");
        cmd.add_option("--shrinkage", shrinkage, "Boosting shrinkage in (0, 1]");
    }

    [[nodiscard]] nyts::ml::model_spec spec(const nyts::ml::model_kind kind, const std::uint64_t seed) const {
        nyts::ml::model_spec s;
        s.kind = kind;
        s.seed = seed;
        if (learning_rate) s.gd.learning_rate = *learning_rate;
        if (tolerance) s.gd.tolerance = *tolerance;
        if (max_iters) s.gd.max_iters = *max_iters;
        if (l2) s.gd.l2 = *l2;
        s.standardize = !no_standardize;
        if (max_depth) {
            s.tree.max_depth = *max_depth;
            s.forest.tree.max_depth = *max_depth;
            s.gbm.max_depth = *max_depth;
        }
        if (min_samples) {
            s.tree.min_samples = *min_samples;
            s.forest.tree.min_samples = *min_samples;
            s.gbm.min_samples = *min_samples;
        }
        if (n_trees) s.forest.n_trees = *n_trees;
        if (max_features) s.forest.max_features = *max_features;
        s.forest.bootstrap = !no_bootstrap;
        if (n_stages) s.gbm.n_stages = *n_stages;
        if (shrinkage) s.gbm.shrinkage = *shrinkage;
        return s;
    }
};

struct split_options {
    double test_fraction = 0.2;
    bool no_stratify = false;

    void add_to(CLI::App &cmd) {
        cmd.add_option("--test-fraction", test_fraction, "Held-out share of the rows")->check(CLI::Range(0.0, 1.0))->envname("NYTS_TEST_FRACTION");
        cmd.add_flag("--no-stratify", no_stratify, "Draw the test rows without keeping class proportions");
    }

    [[nodiscard]] nyts::ingest::split_spec spec(const std::uint64_t seed) const { return { test_fraction, seed, !no_stratify }; }
};

// ---- train -----------------------------------------------------------------

struct train_options {
    std::string model = "gb";
    std::string data;
    std::uint64_t seed = 0;
    std::string catalog;
    std::string out;
    std::string created;
    std::string manifest;
    model_options hyper;
    split_options split;
};

void attach_catalog(nyts::ml::classifier_model &model, const std::string &catalog_path) {
    const nyts::schema::question_catalog catalog = nyts::schema::load_catalog_file(catalog_path);
    const std::vector<nyts::schema::feature_column> layout = nyts::schema::feature_layout(catalog);
    if (layout.size() != model.metadata.feature_names.size()) {
        throw nyts::input_error{ fmt::format("data has {} features but catalog {} lays out {}", model.metadata.feature_names.size(), catalog.version(), layout.size()) };
    }
    for (std::size_t j = 0; j < layout.size(); ++j) {
        if (layout[j].name != model.metadata.feature_names[j]) {
            throw nyts::input_error{ fmt::format("feature {} is '{}' in the data but '{}' in the catalog", j, model.metadata.feature_names[j], layout[j].name) };
        }
        model.metadata.feature_domains.push_back(layout[j].allowed);
    }
    model.metadata.catalog_version = catalog.version();
}

int run_train(const train_options &o) {
    run_manifest manifest{ "train" };
    const nyts::ml::model_kind kind = nyts::ml::parse_model_kind(o.model);
    const nyts::ingest::dataset data = nyts::ingest::read_prepared_csv(nyts::read_file(o.data));
    const auto [train, test] = nyts::ingest::train_test_split(data, o.split.spec(o.seed));
    manifest.phase("load");

    const nyts::ml::model_spec spec = o.hyper.spec(kind, o.seed);
    nyts::ml::classifier_model model = nyts::ml::train_model(train, spec);
    manifest.phase("fit");
    if (!o.catalog.empty()) {
        attach_catalog(model, o.catalog);
    }
    model.metadata.created = creation_stamp(o.created);

    const double train_acc = nyts::metrics::report(train.labels, nyts::ml::predict_labels(model, train.features), std::vector<int>{ 0, 1 }).accuracy;
    const double test_acc = nyts::metrics::report(test.labels, nyts::ml::predict_labels(model, test.features), std::vector<int>{ 0, 1 }).accuracy;
    const std::string id = nyts::persist::save_file(model, o.out);

    fmt::print("model:          {} ({})\n", nyts::ml::display_name(kind), nyts::ml::to_string(kind));
    fmt::print("rows:           {} train, {} test\n", train.size(), test.size());
    fmt::print("train accuracy: {:.4f}\n", train_acc);
    fmt::print("test accuracy:  {:.4f}\n", test_acc);
    fmt::print("model id:       {}\n", id);

    manifest.config("model", o.model);
    manifest.config("data", o.data);
    manifest.config("catalog", o.catalog);
    manifest.config("test_fraction", o.split.test_fraction);
    manifest.config("stratified", !o.split.no_stratify);
    manifest.config("hyperparameters", model.metadata.hyperparameters);
    manifest.config("created", model.metadata.created);
    manifest.config("train_accuracy", train_acc);
    manifest.config("test_accuracy", test_acc);
    manifest.seed("seed", o.seed);
    manifest.input(o.data);
    if (!o.catalog.empty()) {
        manifest.input(o.catalog);
    }
    manifest.output(o.out);
    manifest.write(manifest_path(o.manifest, o.out));
    return 0;
}

// ---- evaluate --------------------------------------------------------------

struct evaluate_options {
    std::string model;
    std::string data;
    std::string subset = "all";
    std::uint64_t seed = 0;
    split_options split;
    std::string json_out;
    std::string manifest;
};

int run_evaluate(const evaluate_options &o) {
    run_manifest manifest{ "evaluate" };
    const nyts::persist::loaded_model loaded = nyts::persist::load_file(o.model);
    nyts::ingest::dataset data = nyts::ingest::read_prepared_csv(nyts::read_file(o.data));
    if (data.feature_names != loaded.model.metadata.feature_names) {
        throw nyts::input_error{ fmt::format("data columns do not match the model's {} features", loaded.model.arity()) };
    }
    if (o.subset != "all") {
        auto [train, test] = nyts::ingest::train_test_split(data, o.split.spec(o.seed));
        data = o.subset == "train" ? std::move(train) : std::move(test);
    }
    const nyts::metrics::class_report report = nyts::metrics::report(data.labels, nyts::ml::predict_labels(loaded.model, data.features), std::vector<int>{ 0, 1 });
    fmt::print("{}", nyts::metrics::render_report(report, fmt::format("{} on {} ({} rows)", nyts::ml::display_name(loaded.model.kind()), o.subset, data.size())));
    if (!o.json_out.empty()) {
        nyts::write_file_atomic(o.json_out, nyts::metrics::report_json(report));
    }
    if (!o.manifest.empty()) {
        manifest.config("model", o.model);
        manifest.config("data", o.data);
        manifest.config("subset", o.subset);
        manifest.config("test_fraction", o.split.test_fraction);
        manifest.config("stratified", !o.split.no_stratify);
        manifest.seed("seed", o.seed);
        manifest.input(o.model);
        manifest.input(o.data);
        if (!o.json_out.empty()) {
            manifest.output(o.json_out);
        }
        manifest.write(o.manifest);
    }
    return 0;
}

// ---- compare ---------------------------------------------------------------

struct compare_options {
    std::string data;
    std::uint64_t seed = 0;
    std::vector<std::string> models{ "tree", "nb", "logistic", "forest", "gb" };
    std::size_t folds = 5;
    split_options split;
    model_options hyper;
    std::string out;
    std::string plot;
    std::string svg;
    std::string manifest;
    bool reports = false;
};

int run_compare(const compare_options &o) {
    run_manifest manifest{ "compare" };
    const nyts::ingest::dataset data = nyts::ingest::read_prepared_csv(nyts::read_file(o.data));
    std::vector<nyts::ml::model_spec> specs;
    for (const std::string &name : o.models) {
        specs.push_back(o.hyper.spec(nyts::ml::parse_model_kind(name), o.seed));
    }
    const nyts::metrics::cv_config cv{ o.folds, o.seed, !o.split.no_stratify };
    const nyts::metrics::comparison_table table = nyts::metrics::compare_models(data, o.split.spec(o.seed), specs, cv);
    manifest.phase("compare");

    const std::string rendered = nyts::metrics::render_comparison(table);
    fmt::print("{} train rows, {} test rows, {}-fold CV\n\n{}", table.train_rows, table.test_rows, o.folds, rendered);
    if (o.reports) {
        for (const nyts::metrics::comparison_row &row : table.rows) {
            fmt::print("\n{}", nyts::metrics::render_report(row.test_report, fmt::format("{} (test)", nyts::ml::display_name(row.kind))));
        }
    }

    const std::string data_file = nyts::metrics::comparison_csv(table);
    std::vector<fs::path> outputs;
    if (!o.out.empty()) {
        nyts::write_file_atomic(o.out, rendered);
        outputs.emplace_back(o.out);
    }
    if (!o.plot.empty()) {
        nyts::write_file_atomic(o.plot, data_file);
        outputs.emplace_back(o.plot);
    }
    if (!o.svg.empty()) {
        const std::vector<nyts::metrics::comparison_point> points = nyts::metrics::parse_comparison_csv(data_file);
        nyts::write_file_atomic(o.svg, nyts::metrics::comparison_svg(points));
        outputs.emplace_back(o.svg);
    }

    std::string manifest_file = o.manifest;
    if (manifest_file.empty() && !outputs.empty()) {
        manifest_file = outputs.front().string() + ".manifest.json";
    }
    if (!manifest_file.empty()) {
        manifest.config("data", o.data);
        manifest.config("models", o.models);
        manifest.config("folds", o.folds);
        manifest.config("test_fraction", o.split.test_fraction);
        manifest.config("stratified", !o.split.no_stratify);
        json hp = json::object();
        for (const nyts::ml::model_spec &spec : specs) {
            hp[std::string{ nyts::ml::to_string(spec.kind) }] = nyts::ml::hyperparameters(spec);
        }
        manifest.config("hyperparameters", hp);
        manifest.seed("seed", o.seed);
        manifest.input(o.data);
        for (const fs::path &p : outputs) {
            manifest.output(p);
        }
        manifest.write(manifest_file);
    }
    return 0;
}

// ---- synth -----------------------------------------------------------------

struct synth_options {
    std::string catalog = default_catalog();
    std::size_t rows = 1000;
    std::string signal = "Q6:1.5,Q27:-2,Q30:1;intercept=-1";
    std::uint64_t seed = 0;
    std::string out;
    std::string manifest;
};

int run_synth(const synth_options &o) {
    run_manifest manifest{ "synth" };
    const nyts::schema::question_catalog catalog = nyts::schema::load_catalog_file(o.catalog);
    const nyts::ingest::signal_config signal = nyts::ingest::parse_signal(o.signal);
    const nyts::ingest::raw_table table = nyts::ingest::generate_synthetic(o.rows, catalog, signal, o.seed);
    nyts::write_file_atomic(o.out, nyts::ingest::to_csv(table));
    fmt::print("wrote {} rows x {} columns to {}\n", table.rows.size(), table.columns.size(), o.out);

    manifest.config("catalog", o.catalog);
    manifest.config("catalog_version", catalog.version());
    manifest.config("rows", o.rows);
    manifest.config("signal", nyts::ingest::to_string(signal));
    manifest.seed("seed", o.seed);
    manifest.input(o.catalog);
    manifest.output(o.out);
    manifest.write(manifest_path(o.manifest, o.out));
    return 0;
}

// ---- serve -----------------------------------------------------------------

struct serve_options {
    std::string model;
    bool no_model = false;
    std::string catalog = default_catalog();
    std::string host = "127.0.0.1";
    int port = 8080;
    std::vector<std::string> cors;
};

int run_serve(const serve_options &o) {
    std::optional<nyts::persist::loaded_model> model;
    if (!o.no_model) {
        if (o.model.empty()) {
            throw nyts::input_error{ "serve needs --model <file> (or --no-model for a degraded service)" };
        }
        model = nyts::persist::load_file(o.model);
    }
    nyts::service::prediction_service service{ nyts::schema::load_catalog_file(o.catalog), std::move(model), { o.cors } };
    fmt::print("serving on http://{}:{} ({})\n", o.host, o.port, service.ready() ? "ok" : "degraded");
    std::fflush(stdout);
    if (!nyts::service::run_server(service, o.host, o.port)) {
        fmt::print(stderr, "error: cannot listen on {}:{}\n", o.host, o.port);
        return exit_input;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{ "Smoking-intention survey pipeline: prepare, train, evaluate, compare, synth, serve" };
    app.require_subcommand(1);

    prepare_options prep;
    CLI::App *prepare = app.add_subcommand("prepare", "Impute, filter the never-smoker cohort and derive the label");
    prepare->add_option("--input", prep.input, "Raw survey CSV")->required()->check(CLI::ExistingFile);
    prepare->add_option("--catalog", prep.catalog, "Schema document")->envname("NYTS_CATALOG")->check(CLI::ExistingFile);
    prepare->add_option("--target-policy", prep.policy, "Label rule")->check(CLI::IsMember({ "q16-only", "any-of-six" }))->envname("NYTS_TARGET_POLICY");
    prepare->add_flag("--cohort-q59", prep.cohort_q59, "Also require 'never' on Q59");
    prepare->add_flag("--cohort-q28", prep.cohort_q28, "Also require never having used e-cigarettes (Q28)");
    prepare->add_option("--out", prep.out, "Prepared CSV")->required();
    prepare->add_option("--report", prep.report, "Preparation report (default <out>.report.json)");
    prepare->add_option("--manifest", prep.manifest, "Run manifest (default <out>.manifest.json)");

    train_options tr;
    CLI::App *train = app.add_subcommand("train", "Fit one model on the training split and save it");
    train->add_option("--model", tr.model, "linear, logistic, nb, tree, forest or gb")->check(CLI::IsMember({ "linear", "logistic", "nb", "tree", "forest", "gb" }));
    train->add_option("--data", tr.data, "Prepared CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--seed", tr.seed, "Split and learner seed")->envname("NYTS_SEED");
    train->add_option("--catalog", tr.catalog, "Schema whose domains and version the model records")->envname("NYTS_CATALOG")->check(CLI::ExistingFile);
    train->add_option("--created", tr.created, "Creation timestamp to record (default from SOURCE_DATE_EPOCH)");
    train->add_option("--out", tr.out, "Model file (.imodel)")->required();
    train->add_option("--manifest", tr.manifest, "Run manifest (default <out>.manifest.json)");
    tr.hyper.add_to(*train);
    tr.split.add_to(*train);

    evaluate_options ev;
    CLI::App *evaluate = app.add_subcommand("evaluate", "Print the classification report of a saved model");
    evaluate->add_option("--model", ev.model, "Model file")->required()->check(CLI::ExistingFile)->envname("NYTS_MODEL");
    evaluate->add_option("--data", ev.data, "Prepared CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--subset", ev.subset, "Rows to score: all, or the train/test side of the split")->check(CLI::IsMember({ "all", "train", "test" }));
    evaluate->add_option("--seed", ev.seed, "Split seed (with --subset)")->envname("NYTS_SEED");
    evaluate->add_option("--json", ev.json_out, "Also write the full-precision report as JSON");
    evaluate->add_option("--manifest", ev.manifest, "Run manifest");
    ev.split.add_to(*evaluate);

    compare_options cmp;
    CLI::App *compare = app.add_subcommand("compare", "Cross-validate and test several models on one split");
    compare->add_option("--data", cmp.data, "Prepared CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--seed", cmp.seed, "Split, fold and learner seed")->envname("NYTS_SEED");
    compare->add_option("--models", cmp.models, "Models in table order")->delimiter(',')->check(CLI::IsMember({ "linear", "logistic", "nb", "tree", "forest", "gb" }));
    compare->add_option("--folds", cmp.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    compare->add_option("--out", cmp.out, "Write the rendered table here");
    compare->add_option("--plot", cmp.plot, "Write the plot data file (CSV) here");
    compare->add_option("--svg", cmp.svg, "Write a grouped bar chart here");
    compare->add_option("--manifest", cmp.manifest, "Run manifest (default next to the first output)");
    compare->add_flag("--reports", cmp.reports, "Also print each model's test report");
    cmp.hyper.add_to(*compare);
    cmp.split.add_to(*compare);

    synth_options sy;
    CLI::App *synth = app.add_subcommand("synth", "Generate a synthetic survey with a planted signal");
    synth->add_option("--catalog", sy.catalog, "Schema document")->envname("NYTS_CATALOG")->check(CLI::ExistingFile);
    synth->add_option("--rows", sy.rows, "Respondents")->check(CLI::PositiveNumber);
    synth->add_option("--signal", sy.signal, "Planted signal, e.g. 'Q6:1.5,Q27:-2;intercept=-1;noise=0'");
    synth->add_option("--seed", sy.seed, "Generator seed")->envname("NYTS_SEED");
    synth->add_option("--out", sy.out, "Survey CSV")->required();
    synth->add_option("--manifest", sy.manifest, "Run manifest (default <out>.manifest.json)");

    serve_options sv;
    CLI::App *serve = app.add_subcommand("serve", "Run the questionnaire prediction service");
    serve->add_option("--model", sv.model, "Model file")->envname("NYTS_MODEL")->check(CLI::ExistingFile);
    serve->add_flag("--no-model", sv.no_model, "Start without a model (health reports degraded)");
    serve->add_option("--catalog", sv.catalog, "Schema document")->envname("NYTS_CATALOG")->check(CLI::ExistingFile);
    serve->add_option("--host", sv.host, "Bind address")->envname("NYTS_HOST");
    serve->add_option("--port", sv.port, "Port")->envname("NYTS_PORT")->check(CLI::Range(0, 65535));
    serve->add_option("--cors-origin", sv.cors, "Allowed browser origin (repeatable, * for any)")->envname("NYTS_CORS_ORIGINS")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*prepare) return run_prepare(prep);
        if (*train) return run_train(tr);
        if (*evaluate) return run_evaluate(ev);
        if (*compare) return run_compare(cmp);
        if (*synth) return run_synth(sy);
        if (*serve) return run_serve(sv);
    } catch (const nyts::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_input;
    } catch (const std::exception &e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return exit_internal;
    }
    return exit_usage;
}
