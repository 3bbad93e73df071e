#pragma once

#include <stdexcept>
#include <string>

namespace mscache {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside its documented domain.
struct BadRange : Error {
    using Error::Error;
};

// Combined cache and server storage cannot hold the library.
struct InfeasibleStorage : Error {
    using Error::Error;
};

// Byte length fails a required divisibility.
struct BadLength : Error {
    using Error::Error;
};

// Fewer than k shares with distinct indices supplied to the decoder.
struct NotEnoughShares : Error {
    using Error::Error;
};

// Decode system not invertible; impossible for a valid generator, so it
// signals a codec bug.
struct SingularSystem : Error {
    using Error::Error;
};

// Enumeration size above the guard threshold.
struct TooLarge : Error {
    using Error::Error;
};

// Type vector inconsistent with the server count or total load.
struct InconsistentType : Error {
    using Error::Error;
};

// Probability weights do not sum to one.
struct BadDistribution : Error {
    using Error::Error;
};

// Asymptotic scan found no bracketing band.
struct NoBracket : Error {
    using Error::Error;
};

// A group member is reachable by no candidate server; signals a corrupted
// topology, unreachable for valid inputs.
struct Uncoverable : Error {
    using Error::Error;
};

// A reconstructed file differs from the library copy.
struct DecodeMismatch : Error {
    using Error::Error;
};

// Exact arithmetic exceeded the 64-bit range.
struct Overflow : Error {
    using Error::Error;
};

} // namespace mscache
