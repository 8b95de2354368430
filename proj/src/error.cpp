#include "hgeo/error.hpp"

namespace hgeo {

const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config:
      return "ConfigError";
    case ErrorCategory::Model:
      return "ModelError";
    case ErrorCategory::Numerics:
      return "NumericsError";
  }
  return "UnknownError";
}

Error::Error(ErrorCategory category, std::string name, const std::string& message)
    : std::runtime_error(name + ": " + message), category_(category), name_(std::move(name)) {}

void throw_config(const std::string& name, const std::string& msg) {
  throw Error(ErrorCategory::Config, name, msg);
}

void throw_model(const std::string& name, const std::string& msg) {
  throw Error(ErrorCategory::Model, name, msg);
}

void throw_numerics(const std::string& name, const std::string& msg) {
  throw Error(ErrorCategory::Numerics, name, msg);
}

}  // namespace hgeo
