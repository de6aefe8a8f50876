#pragma once

#include <stdexcept>
#include <string>

namespace symlab {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A matrix passed as a rotation fails the orthonormality / det(+1) check.
struct InvalidRotationError : Error {
    using Error::Error;
};

// A 6-D rotation vector cannot be orthonormalized (near-zero or parallel columns).
struct Degenerate6dError : Error {
    using Error::Error;
};

// Camera placed inside the object volume.
struct InvalidViewpointError : Error {
    using Error::Error;
};

// Shape mismatch or corrupt data when running or (de)serializing a model.
struct ModelIoError : Error {
    using Error::Error;
};

// Training hit a non-finite loss; message carries step and term values.
struct TrainAbortError : Error {
    using Error::Error;
};

}  // namespace symlab
