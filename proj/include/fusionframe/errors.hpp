#ifndef FUSIONFRAME_ERRORS_HPP
#define FUSIONFRAME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fusionframe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files or unreadable paths.
class IoError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain (not a fusion frame, A < 1, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A computed object failed one of its own postconditions.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace fusionframe

#endif // FUSIONFRAME_ERRORS_HPP
