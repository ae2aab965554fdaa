#ifndef SLICELOC_ERRORS_HPP
#define SLICELOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sliceloc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A geometric quantity is undefined (coincident points, all rays parallel, ...).
struct DegenerateGeometry : Error {
    using Error::Error;
};

/// A configuration value violates its invariants.
struct InvalidConfig : Error {
    using Error::Error;
};

/// Circular mean of a set of angles with a (near-)zero resultant vector.
struct UndefinedMean : Error {
    using Error::Error;
};

/// Subset size k outside the admissible range [3, n].
struct InvalidArity : Error {
    using Error::Error;
};

/// Too few samples for a statistical fit.
struct InsufficientSamples : Error {
    using Error::Error;
};

/// A fit has no usable support (empty bins, zero normalization, ...).
struct DegenerateFit : Error {
    using Error::Error;
};

/// Depth value marked invalid was used in a projection.
struct InvalidDepth : Error {
    using Error::Error;
};

/// Coordinate outside its valid range.
struct OutOfRange : Error {
    using Error::Error;
};

/// An operation that needs at least one record received none.
struct EmptyInput : Error {
    using Error::Error;
};

/// Malformed input file or record.
struct ParseError : Error {
    using Error::Error;
};

} // namespace sliceloc

#endif // SLICELOC_ERRORS_HPP
