#pragma once

#include <stdexcept>
#include <string>

namespace secord {

/// Caller passed something the model does not accept (bad scope, unknown variable, ...).
class ModelError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size or memory budget would be exceeded.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Instance document could not be read.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace secord
