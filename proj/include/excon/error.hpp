#pragma once

#include <stdexcept>
#include <string>

namespace excon {

// Numeric values are part of the C ABI (see excon.h); keep them in sync.
enum class ErrorCode : int {
    kDomain = 1,
    kInsufficientData = 2,
    kData = 3,
    kDegenerateVariance = 4,
    kComputation = 5,
    kConfiguration = 6,
    kSeparation = 7,
    kCollinearity = 8,
    kInfeasible = 9,
    kParse = 10,
    kIo = 11,
    kInvalidArgument = 12,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace excon
