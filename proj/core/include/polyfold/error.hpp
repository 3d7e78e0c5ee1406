#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyfold {

enum class ErrorKind {
  invalid_size,
  unsupported_mode,
  invalid_selector,
  too_large,
  not_contained,
  degenerate_factor,
  folding_divergence,
  numerical_failure,
  invalid_input,
  lift_failure,
  degenerate_input,
  io_error,
  parse_error,
};

// Kebab-case name used in machine-readable failure reports.
std::string_view error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace polyfold
