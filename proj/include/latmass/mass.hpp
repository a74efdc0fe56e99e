#pragma once

#include <set>
#include <utility>
#include <vector>

#include "latmass/counting.hpp"

namespace latmass {

/// A shifted lattice L + u/c with diagonal L, primitive integer shift u
/// and odd conductor c.
struct ShiftedLatticeSpec {
    DiagonalForm form;
    std::vector<Int> u;
    Int c;

    ShiftedLatticeSpec(DiagonalForm form_, std::vector<Int> u_, Int c_);

    unsigned long conductor_exponent(const Int& p) const;  // c_p = ord_p(c)
};

struct PrimeClassification {
    std::set<Int> omega1;
    std::set<Int> omega2;
};

/// Omega_2 holds the primes dividing gcd(d_L, Q(u), c); Omega_1 the rest of
/// the prime divisors of c.
PrimeClassification classify_primes(const ShiftedLatticeSpec& spec);

/// u_p = d^{-1} u mod p^{c_p}, where c = p^{c_p} d with p not dividing d.
std::vector<Int> localize_shift(const ShiftedLatticeSpec& spec, const Int& p);

/// The per-prime bound factor: 1/9 at p = 3, 1/2 - 3/(2p) for p >= 5.
Rat f_factor(const Int& p);

/// Whether S_{delta,p} = {r : p^{r*delta} f_p < 1} is nonempty, decided
/// exactly via cross-multiplied integer powers.
bool s_delta_nonempty(const Int& p, const Rat& delta);

struct CDeltaResult {
    RationalInterval value;
    std::vector<Int> factor_primes;
};

/// C_delta = product of p^delta * f_p over primes with S_{delta,p} nonempty.
CDeltaResult c_delta(const Rat& delta, const Rat& width);

enum class MassBoundMode { GENERAL, DIAGONAL_CLOSED_FORM };

struct MassBoundResult {
    std::vector<std::pair<Int, Rat>> factors;  // per prime dividing c
    Rat total;
    MassBoundMode mode;
};

/// Certified lower bound for m(L + u/c) / m(L); half of it bounds the
/// proper-mass ratio per prime factor.
MassBoundResult mass_ratio_lower_bound(const ShiftedLatticeSpec& spec, MassBoundMode mode);

/// mass_of_L * C_delta * c^(l-1-delta); the lower endpoint is the
/// certified class-number bound.
RationalInterval class_number_lower_bound(const ShiftedLatticeSpec& spec, const Rat& mass_of_L,
                                          const Rat& delta, const RationalInterval& c_delta_interval);

}  // namespace latmass
