#pragma once

#include <stdexcept>
#include <string>

namespace latmass {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPrime : Error {
    explicit InvalidPrime(const std::string& msg = "argument is not an odd prime") : Error(msg) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

struct PrecisionError : Error {
    explicit PrecisionError(const std::string& msg = "working precision exhausted") : Error(msg) {}
};

struct NotPrimitive : Error {
    explicit NotPrimitive(const std::string& msg = "vector is not primitive") : Error(msg) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& msg = "enumeration ceiling exceeded") : Error(msg) {}
};

struct NoPivot : Error {
    explicit NoPivot(const std::string& msg = "no valid pivot index") : Error(msg) {}
};

struct HypothesisViolated : Error {
    using Error::Error;
};

struct UndefinedBranch : Error {
    using Error::Error;
};

struct EvenConductor : Error {
    explicit EvenConductor(const std::string& msg = "conductor must be odd") : Error(msg) {}
};

struct GcdHypothesisViolated : Error {
    using Error::Error;
};

struct RankTooSmall : Error {
    explicit RankTooSmall(const std::string& msg = "rank must be at least 3") : Error(msg) {}
};

struct IsotropicShift : Error {
    explicit IsotropicShift(const std::string& msg = "shift vector has Q(u) = 0") : Error(msg) {}
};

struct UnsupportedRank : Error {
    explicit UnsupportedRank(const std::string& msg = "rank outside the supported range 3..10") : Error(msg) {}
};

}  // namespace latmass
