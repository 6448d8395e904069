#pragma once

#include <stdexcept>
#include <string>

namespace candlecast {

// Input that violates a documented precondition or cannot be repaired.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical routine could not produce a finite, well-defined result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Regressor or moment matrix lost rank; callers may retry with a smaller model.
class RankDeficientError : public NumericError {
public:
    using NumericError::NumericError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace candlecast
