#include "latmass/mass.hpp"

#include <algorithm>
#include <numeric>

namespace latmass {

namespace {

Rat rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::vector<std::pair<Int, unsigned long>> conductor_factors(const Int& c) { return factorize(c); }

Int next_odd_prime(const Int& p) {
    Int q;
    mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
    return q;
}

}  // namespace

ShiftedLatticeSpec::ShiftedLatticeSpec(DiagonalForm form_, std::vector<Int> u_, Int c_)
    : form(std::move(form_)), u(std::move(u_)), c(std::move(c_)) {
    if (u.size() != form.rank()) throw InvalidInput("shift vector rank mismatch");
    if (c < 1) throw InvalidInput("conductor must be positive");
    if (c % 2 == 0) throw EvenConductor();
    Int g = 0;
    for (const Int& x : u) g = gcd(g, x);
    if (g != 1) throw NotPrimitive("shift vector must have coprime coordinates");
}

unsigned long ShiftedLatticeSpec::conductor_exponent(const Int& p) const { return ord(p, c).value(); }

PrimeClassification classify_primes(const ShiftedLatticeSpec& spec) {
    PrimeClassification out;
    const Int d = spec.form.determinant();
    const Int m = spec.form.evaluate(spec.u);
    for (const auto& [p, e] : conductor_factors(spec.c)) {
        if (d % p == 0 && m % p == 0)
            out.omega2.insert(p);
        else
            out.omega1.insert(p);
    }
    return out;
}

std::vector<Int> localize_shift(const ShiftedLatticeSpec& spec, const Int& p) {
    if (!is_odd_prime(p) || spec.c % p != 0) throw InvalidPrime("prime must divide the conductor");
    const unsigned long k = spec.conductor_exponent(p);
    const Int pk = ipow(p, k);
    const Int d = spec.c / pk;
    Int dinv;
    if (mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw Error("cofactor not invertible");  // unreachable: gcd(d, p) = 1
    std::vector<Int> out;
    out.reserve(spec.u.size());
    for (const Int& x : spec.u) {
        Int v = (dinv * x) % pk;
        if (v < 0) v += pk;
        out.push_back(v);
    }
    return out;
}

Rat f_factor(const Int& p) {
    if (!is_odd_prime(p)) throw InvalidPrime();
    if (p == 3) return Rat(1, 9);
    return rat(p - 3, 2 * p);
}

bool s_delta_nonempty(const Int& p, const Rat& delta) {
    if (delta <= 0) throw InvalidInput("delta must be positive");
    const Rat fp = f_factor(p);
    // p^delta * f_p < 1  <=>  p^n * num(f)^d < den(f)^d  for delta = n/d.
    const unsigned long n = delta.get_num().get_ui();
    const unsigned long d = delta.get_den().get_ui();
    return ipow(p, n) * ipow(fp.get_num(), d) < ipow(fp.get_den(), d);
}

CDeltaResult c_delta(const Rat& delta, const Rat& width) {
    if (delta <= 0 || width <= 0) throw InvalidInput("c_delta needs positive delta and width");

    // p^delta * f_p is increasing in p for p >= 5, so the first failing
    // prime >= 5 ends the enumeration; p = 3 is checked on its own.
    std::vector<Int> primes;
    if (s_delta_nonempty(Int(3), delta)) primes.push_back(3);
    for (Int p = 5; s_delta_nonempty(p, delta); p = next_odd_prime(p)) primes.push_back(p);

    CDeltaResult out;
    out.factor_primes = primes;
    if (delta.get_den() == 1) {
        Rat exact = 1;
        for (const Int& p : primes) exact *= Rat(ipow(p, delta.get_num().get_ui())) * f_factor(p);
        out.value = RationalInterval::point(exact);
        return out;
    }
    // Shrink the per-factor widths until the product interval is well
    // inside the requested width.
    for (Rat w = width / 4;; w /= 16) {
        RationalInterval prod = RationalInterval::point(Rat(1));
        for (const Int& p : primes) prod = prod * (pow_interval(p, delta, w) * f_factor(p));
        if (prod.width() * 2 <= width) {
            out.value = prod;
            return out;
        }
    }
}

static void check_bound_preconditions(const ShiftedLatticeSpec& spec) {
    if (spec.form.rank() < 3) throw RankTooSmall();
    if (spec.form.evaluate(spec.u) == 0) throw IsotropicShift();
    const auto cls = classify_primes(spec);
    if (!cls.omega2.empty())
        throw GcdHypothesisViolated("gcd(d_L, Q(u), c) has prime divisor " + cls.omega2.begin()->get_str());
}

MassBoundResult mass_ratio_lower_bound(const ShiftedLatticeSpec& spec, MassBoundMode mode) {
    check_bound_preconditions(spec);
    MassBoundResult out;
    out.mode = mode;
    out.total = 1;
    for (const auto& [p, cp] : conductor_factors(spec.c)) {
        Rat factor;
        if (mode == MassBoundMode::DIAGONAL_CLOSED_FORM) {
            factor = f_factor(p);
        } else {
            CountQuery q{spec.form, localize_shift(spec, p), {}, 0, p, cp};
            factor = Rat(count_auto(q).count) / 2;
        }
        out.factors.emplace_back(p, factor);
        out.total *= factor;
    }
    if (mode == MassBoundMode::DIAGONAL_CLOSED_FORM)
        out.total *= Rat(ipow(spec.c, static_cast<unsigned long>(spec.form.rank()) - 1));
    return out;
}

RationalInterval class_number_lower_bound(const ShiftedLatticeSpec& spec, const Rat& mass_of_L,
                                          const Rat& delta, const RationalInterval& c_delta_interval) {
    check_bound_preconditions(spec);
    if (mass_of_L <= 0) throw InvalidInput("mass of L must be positive");
    const Rat exponent = Rat(static_cast<unsigned long>(spec.form.rank()) - 1) - delta;
    if (exponent < 0) throw InvalidInput("delta exceeds l - 1");
    RationalInterval cpow = pow_interval(spec.c, exponent, Rat(1, 1000000));
    return c_delta_interval * cpow * mass_of_L;
}

}  // namespace latmass
