#pragma once

#include <stdexcept>
#include <string>

namespace gammalab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid too coarse for the kernel or the coefficient structure.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Two grids that must be related by a change of variables are not.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// A lattice query or shift left the allocated realization window.
class WindowError : public Error {
public:
    using Error::Error;
};

/// Study-level numerical failure (too many unconverged solves, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace gammalab
