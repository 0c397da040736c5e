#pragma once

#include <stdexcept>
#include <string>

namespace demuskin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad modulus, unparsable word, dimension mismatch.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A proposed group action does not descend to the presented group.
class ActionError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive search refused because the instance exceeds the enumeration guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace demuskin
