#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace forge {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed files, bad JSON, unknown fields, invalid structure data.
struct FormatError : Error {
  using Error::Error;
};

// Operation applied to structures over the wrong signature.
struct SignatureError : Error {
  using Error::Error;
};

// Arguments violate an operation's stated preconditions.
struct PreconditionError : Error {
  using Error::Error;
};

// A configurable search/size cap was hit; the search was refused, not failed.
struct GuardExceeded : Error {
  GuardExceeded(std::string guardName, const std::string& msg)
      : Error(msg), guard(std::move(guardName)) {}
  std::string guard;
};

}  // namespace forge
