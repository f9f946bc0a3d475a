#ifndef GRACT_ERROR_HPP
#define GRACT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gract {

/// Index argument outside the valid domain of a structure.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Lookup of an element that does not exist (select past the count, unknown object).
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input to a builder (point outside the grid, overlapping key sets).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed serialized data: bad magic, unsupported version, truncation.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal inconsistency detected while decoding (e.g. a log leaves the grid).
class CorruptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gract

#endif // GRACT_ERROR_HPP
