#pragma once

#include <stdexcept>
#include <string>

namespace mfts {

// Bad input: malformed files, violated preconditions, misaligned series.
// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An analysis step could not produce a meaningful result (too few scales,
// fit divergence, no uniform-sign q). The CLI maps this to exit code 2.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mfts
