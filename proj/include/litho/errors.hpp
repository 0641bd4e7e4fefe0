#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace litho {

// Typed failure carried across module boundaries. `module` names the
// subsystem that raised it, `code` is a stable machine-readable tag
// ("sampling-exhausted", "malformed-rle", ...) that tests and the CLI
// match on.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& message)
      : std::runtime_error("[" + module + "/" + code + "] " + message),
        module_(std::move(module)),
        code_(std::move(code)) {}

  const std::string& module_name() const { return module_; }
  const std::string& code() const { return code_; }

 private:
  std::string module_;
  std::string code_;
};

}  // namespace litho
