#pragma once

#include <stdexcept>
#include <string>

namespace genfunc {

/// Base class for all library errors. The message starts with a stable
/// kebab-case code ("under-resolved: ...") so callers can branch on it.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition on an operation's inputs was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A growth profile could not be assigned to any scale family
/// (regression residuals above the validity threshold).
class UnclassifiableError : public Error {
public:
    using Error::Error;
};

}  // namespace genfunc
