#pragma once

#include <stdexcept>
#include <string>

namespace curvepow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("modular inverse of zero") {}
};

struct InvalidPoint : Error {
    using Error::Error;
};

struct TooLarge : Error {
    using Error::Error;
};

struct EncodingError : Error {
    using Error::Error;
};

struct GenerationExhausted : Error {
    using Error::Error;
};

struct OrderAmbiguous : Error {
    using Error::Error;
};

struct ResourceLimit : Error {
    using Error::Error;
};

struct NotInInterval : Error {
    using Error::Error;
};

struct NoCandidates : Error {
    NoCandidates() : Error("empty candidate list") {}
};

struct InternalError : Error {
    using Error::Error;
};

} // namespace curvepow
