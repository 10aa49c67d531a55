#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causalnet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad concrete syntax; carries the byte offset of the offending token.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

// Structurally ill-formed input (proof structure, graph, JSON payload, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Objects that cannot be combined (dimension/mu/theta mismatch, non-dual
// kinds, colliding vertex names, ...).
struct NotCompatibleError : Error {
  using Error::Error;
};

// Work-size guards: switching spaces or carrier dimensions above the
// configured bound. Overridable via flags.
struct GuardError : Error {
  using Error::Error;
};

}  // namespace causalnet
