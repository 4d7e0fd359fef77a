#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ocular {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad parameter, shape mismatch).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Unusable input data (unreadable file, bad frame directory).
class InputError : public Error {
public:
    using Error::Error;
};

/// The input is well formed but carries no usable evidence
/// (flat profiles, no edges in a corner ROI, empty event list).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// Non-fatal numerical warnings attached to results.
using Diagnostics = std::vector<std::string>;

}  // namespace ocular
