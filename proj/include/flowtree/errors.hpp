#pragma once

#include <stdexcept>
#include <string>

namespace flowtree {

enum class ErrorKind {
    InvalidInput,
    NotOnWall,
    NotGenericTheta,
    NotGenericAlpha,
    Timeout,
    DivisionByZeroPairing,
    ZeroSignArgument,
    NotPolynomial,
    DegreeExceeded,
    ConsistencyFailure,
    ZeroDivision,
};

const char* error_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace flowtree
