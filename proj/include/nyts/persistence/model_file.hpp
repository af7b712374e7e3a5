#pragma once

#include "nyts/ml/classifier.hpp"  // nyts::ml::classifier_model

#include <filesystem>   // std::filesystem::path
#include <string>       // std::string
#include <string_view>  // std::string_view

namespace nyts::persist {

inline constexpr std::string_view magic = "IMODEL";
inline constexpr int format_version = 1;

/// Serializes a model into the `.imodel` text format (layout in docs/model-format.md).
/// Identical models always produce identical bytes. Throws nyts::model_format_error when a
/// hyperparameter key contains whitespace.
[[nodiscard]] std::string save(const ml::classifier_model &model);

/// Parses and validates `.imodel` bytes. Checks, in order: the checksum line
/// (nyts::checksum_error), the header (nyts::version_error for other versions), then
/// every key and the structure of the parameters (nyts::model_format_error naming the key).
[[nodiscard]] ml::classifier_model load(std::string_view bytes);

/// The hex SHA-256 recorded in the trailing checksum line, verified against the payload.
/// This is the model id reported by the service.
[[nodiscard]] std::string model_id(std::string_view bytes);

struct loaded_model {
    ml::classifier_model model;
    std::string model_id;
};

/// Atomic write (temporary file, then rename). Returns the model id.
std::string save_file(const ml::classifier_model &model, const std::filesystem::path &path);
[[nodiscard]] loaded_model load_file(const std::filesystem::path &path);

}  // namespace nyts::persist
