#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wkstab {

/// Every library failure carries a short machine-readable code
/// ("Unbounded", "DomainError", "parse", ...) next to the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, std::string location = {})
      : std::runtime_error(message), code_(std::move(code)), location_(std::move(location)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::string code_;
  std::string location_;
};

}  // namespace wkstab
