#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbhd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed formula text; `position` is a 0-based character offset.
struct ParseError : Error {
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position(position) {}
  std::size_t position;
};

/// Malformed model, proof or certificate file.
struct FormatError : Error {
  using Error::Error;
};

struct ModelError : Error {
  using Error::Error;
};

/// A state-space or enumeration guard was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

/// Frame constraints that the generator cannot satisfy.
struct ConstraintError : Error {
  using Error::Error;
};

}  // namespace nbhd
