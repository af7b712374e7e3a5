#include "nyts/service/service.hpp"

#include "nyts/exceptions.hpp"       // nyts::validation_error
#include "nyts/ml/classifier.hpp"    // nyts::ml::validate_input, nyts::ml::probability_yes
#include "nyts/service/encoder.hpp"  // nyts::service::parse_submission, nyts::service::encode

#include "fmt/format.h"  // fmt::format
#include "httplib.h"     // httplib::Server
#include "json.hpp"      // nlohmann::ordered_json

#include <algorithm>  // std::find

namespace nyts::service {

namespace {

response json_response(const int status, const nlohmann::ordered_json &body) {
    return { status, body.dump() + "\n", {} };
}

response error_response(const int status, const std::string_view message, const std::string_view field = {}) {
    nlohmann::ordered_json body{ { "error", message } };
    if (!field.empty()) {
        body["field"] = field;
    }
    return json_response(status, body);
}

std::string build_questions_body(const schema::question_catalog &catalog) {
    nlohmann::ordered_json questions = nlohmann::ordered_json::array();
    for (const schema::survey_question &q : schema::predictor_questions(catalog)) {
        nlohmann::ordered_json options = nlohmann::ordered_json::array();
        for (const schema::answer_code &code : q.domain.codes) {
            if (code.code != schema::unanswered) {
                options.push_back({ { "code", code.code }, { "label", code.label } });
            }
        }
        questions.push_back({ { "id", q.id }, { "text", q.text }, { "kind", schema::to_string(q.domain.kind) }, { "options", options } });
    }
    const nlohmann::ordered_json doc{ { "catalog_version", catalog.version() }, { "questions", questions } };
    return doc.dump() + "\n";
}

}  // namespace

prediction_service::prediction_service(std::optional<schema::question_catalog> catalog, std::optional<persist::loaded_model> model, service_config config) :
    catalog_{ std::move(catalog) },
    model_{ std::move(model) },
    config_{ std::move(config) } {
    if (catalog_) {
        questions_body_ = build_questions_body(*catalog_);
    }
    if (catalog_ && model_) {
        std::vector<std::string> expected;
        for (const schema::feature_column &col : schema::feature_layout(*catalog_)) {
            expected.push_back(col.name);
        }
        if (expected != model_->model.metadata.feature_names) {
            throw validation_error{ fmt::format("model features ({}) do not match the catalog's {} predictor columns", model_->model.metadata.feature_names.size(), expected.size()) };
        }
    }
}

prediction_service::~prediction_service() = default;

response prediction_service::questions() const {
    ++requests_;
    if (!catalog_) {
        return error_response(503, "no question catalog is loaded");
    }
    response r{ 200, questions_body_, {} };
    r.headers.emplace_back("Cache-Control", "public, max-age=3600");
    r.headers.emplace_back("ETag", fmt::format("\"{}\"", catalog_->version()));
    return r;
}

response prediction_service::predict(const std::string_view body) const {
    ++requests_;
    ++predict_requests_;
    if (!catalog_) {
        return error_response(503, "no question catalog is loaded");
    }
    std::vector<int> features;
    try {
        const answer_submission submission = parse_submission(body);
        features = encode(submission, *catalog_);
    } catch (const submission_error &e) {
        ++validation_failures_;
        const bool malformed = e.field() == "body" || e.field() == "answers";
        return error_response(malformed ? 400 : 422, e.what(), e.field());
    }
    if (!model_) {
        return error_response(503, "no model is loaded");
    }
    try {
        ml::validate_input(model_->model, features);
    } catch (const validation_error &e) {
        ++validation_failures_;
        return error_response(422, e.what());
    }
    ++model_calls_;
    const double p = ml::probability_yes(model_->model, features);
    return json_response(200, nlohmann::ordered_json{
                                  { "probability_yes", p },
                                  { "label", p > 0.5 ? 1 : 0 },
                                  { "model_id", model_->model_id },
                                  { "catalog_version", catalog_->version() },
                              });
}

response prediction_service::health() const {
    ++requests_;
    nlohmann::ordered_json body{ { "status", ready() ? "ok" : "degraded" } };
    body["model_id"] = model_ ? nlohmann::ordered_json(model_->model_id) : nlohmann::ordered_json(nullptr);
    body["catalog_version"] = catalog_ ? nlohmann::ordered_json(catalog_->version()) : nlohmann::ordered_json(nullptr);
    return json_response(200, body);
}

request_counters prediction_service::counters() const {
    return { requests_.load(), predict_requests_.load(), validation_failures_.load(), model_calls_.load() };
}

response prediction_service::metrics() const {
    const request_counters c = counters();
    return json_response(200, nlohmann::ordered_json{
                                  { "requests", c.requests },
                                  { "predict_requests", c.predict_requests },
                                  { "validation_failures", c.validation_failures },
                                  { "model_calls", c.model_calls },
                              });
}

std::vector<std::pair<std::string, std::string>> prediction_service::cors_headers(const std::string_view origin) const {
    const auto &allowed = config_.cors_origins;
    const bool any = std::find(allowed.begin(), allowed.end(), "*") != allowed.end();
    if (origin.empty() || (!any && std::find(allowed.begin(), allowed.end(), origin) == allowed.end())) {
        return {};
    }
    return {
        { "Access-Control-Allow-Origin", any ? "*" : std::string{ origin } },
        { "Access-Control-Allow-Methods", "GET, POST, OPTIONS" },
        { "Access-Control-Allow-Headers", "Content-Type" },
        { "Vary", "Origin" },
    };
}

void prediction_service::mount(httplib::Server &server) const {
    const auto send = [this](const httplib::Request &req, httplib::Response &res, const response &r) {
        res.status = r.status;
        for (const auto &[name, value] : r.headers) {
            res.set_header(name, value);
        }
        for (const auto &[name, value] : cors_headers(req.get_header_value("Origin"))) {
            res.set_header(name, value);
        }
        res.set_content(r.body, "application/json");
    };
    server.Get("/api/questions", [this, send](const httplib::Request &req, httplib::Response &res) { send(req, res, questions()); });
    server.Post("/api/predict", [this, send](const httplib::Request &req, httplib::Response &res) { send(req, res, predict(req.body)); });
    server.Get("/api/health", [this, send](const httplib::Request &req, httplib::Response &res) { send(req, res, health()); });
    server.Get("/api/metrics", [this, send](const httplib::Request &req, httplib::Response &res) { send(req, res, metrics()); });
    server.Options("/api/.*", [this](const httplib::Request &req, httplib::Response &res) {
        res.status = 204;
        for (const auto &[name, value] : cors_headers(req.get_header_value("Origin"))) {
            res.set_header(name, value);
        }
    });
}

bool run_server(const prediction_service &service, const std::string &host, const int port) {
    httplib::Server server;
    service.mount(server);
    return server.listen(host, port);
}

}  // namespace nyts::service
