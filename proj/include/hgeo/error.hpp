#pragma once

#include <stdexcept>
#include <string>

namespace hgeo {

/// Top-level grouping used by the CLI to pick an exit status.
enum class ErrorCategory { Config, Model, Numerics };

const char* to_string(ErrorCategory c);

/// All library failures are thrown as hgeo::Error. `name()` is the
/// machine-readable error kind (e.g. "DegenerateSpectrum"); `category()`
/// is the coarse bucket reported by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string name, const std::string& message);

  ErrorCategory category() const noexcept { return category_; }
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorCategory category_;
  std::string name_;
};

[[noreturn]] void throw_config(const std::string& name, const std::string& msg);
[[noreturn]] void throw_model(const std::string& name, const std::string& msg);
[[noreturn]] void throw_numerics(const std::string& name, const std::string& msg);

}  // namespace hgeo
