#pragma once

#include <stdexcept>
#include <string>

namespace cyclopadic {

// Raised when a comparison or zero test would need digits beyond the
// tracked precision.
class InsufficientPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The working cyclotomic field does not contain a root of unity that the
// computation needs. `required_level` is the smallest N that would do.
class InsufficientField : public std::runtime_error {
 public:
  InsufficientField(int required_level, const std::string& what)
      : std::runtime_error(what + " (requires N >= " + std::to_string(required_level) + ")"),
        required_level_(required_level) {}

  int required_level() const noexcept { return required_level_; }

 private:
  int required_level_;
};

// A query whose answer depends on an unknown or insufficiently bounded tail.
class InconclusiveTail : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOperation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cyclopadic
