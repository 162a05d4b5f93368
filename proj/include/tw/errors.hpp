#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tw {

using Complex = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleError : Error {
    long index;
    PoleError(const std::string& what, long idx = -1) : Error(what), index(idx) {}
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct ContourError : Error {
    using Error::Error;
};

struct RankError : Error {
    using Error::Error;
};

struct ShiftError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

}  // namespace tw
