#pragma once

#include <stdexcept>
#include <string>

namespace chisini {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid user input: unknown catalog name, bad parameters, arity mismatch,
/// restriction outside the domain, malformed grid files.
struct InvalidInput : Error {
    using Error::Error;
};

/// Operation requires a compact (bounded, closed) interval.
struct UnboundedDomain : Error {
    using Error::Error;
};

/// A sampled or bracketed monotonicity violation was detected.
struct NotMonotone : Error {
    using Error::Error;
};

/// Target value lies outside the range of the function on its interval.
struct NotInRange : Error {
    using Error::Error;
};

struct PointOutOfBox : Error {
    using Error::Error;
};

/// Brute-force oracle grid would exceed the configured size cap.
struct GridTooLarge : Error {
    using Error::Error;
};

/// The equalizer equation for this function has no solution.
struct Unsolvable : Error {
    using Error::Error;
};

/// Diagonal section is not strictly monotone (by sampled evidence).
struct NotIdempotizable : Error {
    using Error::Error;
};

struct GeneratorNotMonotone : Error {
    using Error::Error;
};

/// An operation's stated precondition does not hold for the given input.
struct PreconditionFailed : Error {
    using Error::Error;
};

} // namespace chisini
