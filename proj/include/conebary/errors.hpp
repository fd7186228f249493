#pragma once

#include <stdexcept>
#include <string>

namespace conebary {

// Base class for every error the library raises on contract violations.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimMismatch : Error {
    using Error::Error;
};

// Input expected to be positive definite has an eigenvalue <= 0 (after
// symmetrization). Eigenvalue clamping is never applied.
struct NotPositive : Error {
    using Error::Error;
};

struct Singular : Error {
    using Error::Error;
};

// Condition number beyond the supported range for cone geometry operations.
struct IllConditioned : Error {
    using Error::Error;
};

struct SizeMismatch : Error {
    using Error::Error;
};

struct TOutOfRange : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct BallTooLarge : Error {
    using Error::Error;
};

struct UnsupportedGroup : Error {
    using Error::Error;
};

// Barycenter iteration ran out of rounds before the tuple collapsed.
// Carries the last diameter for diagnosis.
struct NoCollapse : Error {
    NoCollapse(const std::string& what, double diameter_, int rounds_)
        : Error(what), diameter(diameter_), rounds(rounds_) {}
    double diameter;
    int rounds;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct NotUniformlyBounded : Error {
    using Error::Error;
};

struct NotSubgroupFixed : Error {
    using Error::Error;
};

struct NormalityViolated : Error {
    using Error::Error;
};

struct Stage1Failed : Error {
    using Error::Error;
};

}  // namespace conebary
