#pragma once

#include <stdexcept>
#include <string>

namespace vitalguard {

// Base class for everything the library throws on purpose.
// The CLI maps these to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input: records, config files, band tables.
struct ParseError : Error {
    using Error::Error;
};

// Well-formed input whose values violate a contract (range, ordering, shape).
struct DataError : Error {
    using Error::Error;
};

// Numeric state went non-finite in a filter or during training.
struct DivergenceError : Error {
    using Error::Error;
};

// Model files that cannot be read back: bad version, checksum, dimensions.
struct ModelIoError : Error {
    using Error::Error;
};

}  // namespace vitalguard
