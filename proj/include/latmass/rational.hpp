#pragma once

#include <gmpxx.h>

#include <string>

#include "latmass/errors.hpp"

namespace latmass {

// Exact arbitrary-precision integers and rationals. mpq_class keeps the
// canonical form (positive denominator, gcd 1) after every operation.
using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int ipow(unsigned long base, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

/// Parses "n", "-n" or "n/d" into an exact rational.
Rat parse_rational(const std::string& s);

double to_double(const Rat& q);

/// Closed interval [lo, hi] of exact rationals enclosing a real value.
struct RationalInterval {
    Rat lo;
    Rat hi;

    RationalInterval() = default;
    RationalInterval(Rat lo_, Rat hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo > hi) throw InvalidInput("interval endpoints out of order");
    }
    static RationalInterval point(const Rat& v) { return {v, v}; }

    Rat width() const { return hi - lo; }

    /// Interval product; both operands must be nonnegative.
    RationalInterval operator*(const RationalInterval& o) const {
        if (lo < 0 || o.lo < 0) throw InvalidInput("interval product requires nonnegative intervals");
        return {lo * o.lo, hi * o.hi};
    }
    RationalInterval operator*(const Rat& s) const {
        if (s < 0) throw InvalidInput("interval scaling requires nonnegative scalar");
        return {lo * s, hi * s};
    }
};

}  // namespace latmass
