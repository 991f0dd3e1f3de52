#pragma once

#include <stdexcept>
#include <string>

namespace occbench {

enum class ErrorCode {
  InvalidArgument = 1,
  Io = 2,
  Format = 3,
  Config = 4,
  EmptyInput = 5,
  Internal = 99,
};

/// Base exception for everything thrown by the toolkit. The C API maps the
/// code onto its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorCode::InvalidArgument, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorCode::Format, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::Config, w) {}
};
struct EmptyInputError : Error {
  explicit EmptyInputError(const std::string& w) : Error(ErrorCode::EmptyInput, w) {}
};

}  // namespace occbench
