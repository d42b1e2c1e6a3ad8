#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hypoforge {

enum class ErrorCode {
  kInvalidFilter,
  kNotFound,
  kInvalidArgument,
  kParse,
  kValidation,
  kTemplate,
  kConfig,
  kIo,
  kBackend,
  kContract,
};

std::string_view error_code_name(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view name);

// All library failures surface as this exception; the code drives HTTP status
// mapping and CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypoforge
