#pragma once

#include "nyts/persistence/model_file.hpp"  // nyts::persist::loaded_model
#include "nyts/schema/catalog.hpp"          // nyts::schema::question_catalog

#include <atomic>       // std::atomic
#include <cstdint>      // std::uint64_t
#include <memory>       // std::unique_ptr
#include <optional>     // std::optional
#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace httplib {
class Server;
}  // namespace httplib

namespace nyts::service {

struct service_config {
    /// Origins answered with Access-Control-Allow-Origin; "*" allows any origin.
    std::vector<std::string> cors_origins;
};

/// Status code, JSON body and extra headers of one response.
struct response {
    int status{ 200 };
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
};

struct request_counters {
    std::uint64_t requests{ 0 };
    std::uint64_t predict_requests{ 0 };
    std::uint64_t validation_failures{ 0 };
    std::uint64_t model_calls{ 0 };
};

/// The questionnaire/prediction endpoints over an immutable catalog and model.
///
/// Handlers never modify the catalog or model, so any number of requests may run at once.
/// The only mutable members are the request counters, which are atomics.
class prediction_service {
  public:
    /// Throws nyts::validation_error when the model's features differ from the catalog's
    /// predictor layout. Either part may be absent; the service then reports degraded health
    /// and answers the affected endpoints with 503.
    prediction_service(std::optional<schema::question_catalog> catalog, std::optional<persist::loaded_model> model, service_config config = {});
    ~prediction_service();

    prediction_service(const prediction_service &) = delete;
    prediction_service &operator=(const prediction_service &) = delete;

    [[nodiscard]] response questions() const;
    [[nodiscard]] response predict(std::string_view body) const;
    [[nodiscard]] response health() const;
    [[nodiscard]] response metrics() const;

    [[nodiscard]] request_counters counters() const;

    /// CORS headers for a request from `origin` (empty when the origin is not allowed).
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> cors_headers(std::string_view origin) const;

    /// Routes GET /api/questions, POST /api/predict, GET /api/health, GET /api/metrics and
    /// CORS preflight on `server`.
    void mount(httplib::Server &server) const;

    [[nodiscard]] bool ready() const noexcept { return catalog_.has_value() && model_.has_value(); }
    [[nodiscard]] const std::optional<schema::question_catalog> &catalog() const noexcept { return catalog_; }
    [[nodiscard]] const std::optional<persist::loaded_model> &model() const noexcept { return model_; }

  private:
    std::optional<schema::question_catalog> catalog_;
    std::optional<persist::loaded_model> model_;
    service_config config_;
    std::string questions_body_;

    mutable std::atomic<std::uint64_t> requests_{ 0 };
    mutable std::atomic<std::uint64_t> predict_requests_{ 0 };
    mutable std::atomic<std::uint64_t> validation_failures_{ 0 };
    mutable std::atomic<std::uint64_t> model_calls_{ 0 };
};

/// Blocks serving `service` on host:port until the process is interrupted. Returns false
/// when the address cannot be bound.
bool run_server(const prediction_service &service, const std::string &host, int port);

}  // namespace nyts::service
