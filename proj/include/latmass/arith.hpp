#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "latmass/rational.hpp"

namespace latmass {

/// p-adic valuation; the distinguished infinite value is reserved for 0.
class Valuation {
  public:
    static Valuation infinity() { return Valuation(); }
    explicit Valuation(unsigned long v) : value_(v) {}

    bool is_infinite() const { return !value_.has_value(); }
    unsigned long value() const {
        if (is_infinite()) throw InvalidInput("valuation is infinite");
        return *value_;
    }

    bool operator==(const Valuation&) const = default;

  private:
    Valuation() = default;
    std::optional<unsigned long> value_;
};

bool is_odd_prime(const Int& p);

/// Largest e with p^e | n; infinite for n = 0.
Valuation ord(const Int& p, const Int& n);

/// Legendre symbol (a/p) in {-1, 0, +1}.
int legendre(const Int& a, const Int& p);

/// The signed prime (-1/p) * p.
Int delta(const Int& p);

/// Trial-division factorization, primes ascending. The ceiling caps the
/// trial divisor; larger cofactors must themselves be prime to factor.
std::vector<std::pair<Int, unsigned long>> factorize(const Int& n,
                                                     const Int& divisor_ceiling = Int(1000000000));

/// Encloses the real number p^e in a rational interval of width at most
/// `width`, by integer-root bisection on the d-th root of p^n (e = n/d).
RationalInterval pow_interval(const Int& p, const Rat& e, const Rat& width);

}  // namespace latmass
