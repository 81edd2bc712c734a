#pragma once

#include <stdexcept>
#include <string>

namespace seamkit {

enum class ErrorKind { Shape, Config, Precondition, Numeric, Generation, Io };

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Config: return "config";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Generation: return "generation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Base of every error thrown by the library. `context` carries a short
/// machine-readable detail (offending size, final residual, file path).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string context = {})
      : std::runtime_error(message), kind_(kind), context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg, std::string ctx = {})
      : Error(ErrorKind::Shape, msg, std::move(ctx)) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, std::string ctx = {})
      : Error(ErrorKind::Config, msg, std::move(ctx)) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg, std::string ctx = {})
      : Error(ErrorKind::Precondition, msg, std::move(ctx)) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg, std::string ctx = {})
      : Error(ErrorKind::Numeric, msg, std::move(ctx)) {}
};

class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& msg, std::string ctx = {})
      : Error(ErrorKind::Generation, msg, std::move(ctx)) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg, std::string ctx = {})
      : Error(ErrorKind::Io, msg, std::move(ctx)) {}
};

}  // namespace seamkit
