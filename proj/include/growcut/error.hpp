#pragma once

#include <stdexcept>
#include <string>

namespace growcut {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File could not be read, decoded or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Arguments violate an operation's precondition (bad bounds, bad config).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Seed set unusable for the requested method: out of bounds, conflicting
/// labels, missing foreground, or background seeds passed to a
/// single-class method.
class SeedError : public Error {
public:
  using Error::Error;
};

/// Automatic seeding found no usable candidate region.
class NoCandidateError : public Error {
public:
  using Error::Error;
};

}  // namespace growcut
