#pragma once

#include <stdexcept>
#include <string>

namespace anbx {

/// Operational failure carrying a stable code such as E-CONFIG or E-IO.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace anbx
