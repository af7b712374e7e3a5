#pragma once

#include <stdexcept>  // std::runtime_error
#include <string>     // std::string
#include <utility>    // std::move

namespace nyts {

/// Base class of every error raised by the library.
class exception : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A schema document is malformed or violates a catalog invariant.
class schema_error : public exception {
  public:
    using exception::exception;
};

/// Survey or prepared data cannot be turned into a dataset.
class input_error : public exception {
  public:
    using exception::exception;
};

/// A learner could not be fitted (bad configuration, divergence, empty data).
class training_error : public exception {
  public:
    using exception::exception;
};

/// An input vector or answer submission does not fit the model or catalog.
class validation_error : public exception {
  public:
    using exception::exception;
};

/// A model file could not be read back.
class model_format_error : public exception {
  public:
    explicit model_format_error(std::string field, const std::string &what) :
        exception{ what },
        field_{ std::move(field) } {}

    /// Name of the offending header or key.
    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

class checksum_error : public model_format_error {
  public:
    using model_format_error::model_format_error;
};

class version_error : public model_format_error {
  public:
    using model_format_error::model_format_error;
};

}  // namespace nyts
