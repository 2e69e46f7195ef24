#include "flowtree/errors.hpp"

namespace flowtree {

const char* error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotOnWall: return "NotOnWall";
        case ErrorKind::NotGenericTheta: return "NotGenericTheta";
        case ErrorKind::NotGenericAlpha: return "NotGenericAlpha";
        case ErrorKind::Timeout: return "Timeout";
        case ErrorKind::DivisionByZeroPairing: return "DivisionByZeroPairing";
        case ErrorKind::ZeroSignArgument: return "ZeroSignArgument";
        case ErrorKind::NotPolynomial: return "NotPolynomial";
        case ErrorKind::DegreeExceeded: return "DegreeExceeded";
        case ErrorKind::ConsistencyFailure: return "ConsistencyFailure";
        case ErrorKind::ZeroDivision: return "ZeroDivision";
    }
    return "Error";
}

}  // namespace flowtree
