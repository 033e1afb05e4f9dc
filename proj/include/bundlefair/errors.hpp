#pragma once

#include <stdexcept>
#include <string>

namespace bundlefair {

// Stable machine-parsable error codes. The CLI prints them as a single
// "error: <code>: <message>" line so scripts can branch on failures.
namespace errc {
inline constexpr const char* io = "E_IO";
inline constexpr const char* parse = "E_PARSE";
inline constexpr const char* out_of_range = "E_OUT_OF_RANGE";
inline constexpr const char* missing_file = "E_MISSING_FILE";
inline constexpr const char* dimension_mismatch = "E_DIMENSION_MISMATCH";
inline constexpr const char* empty_bundle = "E_EMPTY_BUNDLE";
inline constexpr const char* duplicate_user = "E_DUPLICATE_USER";
inline constexpr const char* duplicate_bundle = "E_DUPLICATE_BUNDLE";
inline constexpr const char* config = "E_CONFIG";
inline constexpr const char* degenerate_input = "E_DEGENERATE_INPUT";
inline constexpr const char* no_users = "E_NO_USERS";
inline constexpr const char* predictions_not_found = "E_PREDICTIONS_NOT_FOUND";
}  // namespace errc

class AuditError : public std::runtime_error {
 public:
  AuditError(std::string code, std::string message)
      : std::runtime_error(code + ": " + message),
        code_(std::move(code)),
        detail_(std::move(message)) {}

  const std::string& code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

}  // namespace bundlefair
