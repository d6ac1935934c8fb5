#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asimkit {

/// Malformed textual input. `position()` is a 0-based offset into the source.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        detail_(message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }
  /// The message without the position suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t position_;
};

/// Structurally invalid document (bad JSON shape, dangling reference, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain (wrong class of function,
/// arity mismatch, index out of range).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The fragment contains connectives the asimulation engine does not handle.
class UnsupportedFragment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace asimkit
