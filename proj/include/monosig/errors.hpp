#pragma once

#include <stdexcept>
#include <string>

namespace monosig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its documented range (builder arguments,
/// mean degree, bisection brackets, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// An input vector or document violates its invariants (macrostate off the
/// simplex, direction vector outside the tangent space, malformed JSON).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An exhaustive search would exceed its configured size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// The integrator left the simplex beyond tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// A bisection bracket does not contain a change of classification.
class NoTransitionError : public Error {
public:
    using Error::Error;
};

} // namespace monosig
