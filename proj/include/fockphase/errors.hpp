#pragma once

#include <stdexcept>
#include <string>

namespace fockphase {

enum class ErrorKind {
  invalid_spec,
  invalid_input,
  quadrature_degree,
  zero_probability_record,
  truncation,
  cap_exceeded,
  no_orientation,
  io,
};

const char* to_string(ErrorKind kind);

/// Exception type thrown by every library entry point. The kind lets the CLI
/// map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fockphase
