#pragma once

#include <stdexcept>
#include <string>

namespace nightforge {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (annotation files, prediction files, fixtures).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A domain invariant was violated (class scheme, box geometry, manifests).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad or incomplete configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A transferred image was paired with an image it was not derived from.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

/// Tensor shapes incompatible for the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Attention-sharing cache misuse (missing or leftover context entries).
class CacheError : public Error {
 public:
  using Error::Error;
};

/// A loss term became non-finite during training.
class TrainingDivergedError : public Error {
 public:
  using Error::Error;
};

/// Simulator connection or scripting failure.
class SimulatorError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, decoded, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nightforge
