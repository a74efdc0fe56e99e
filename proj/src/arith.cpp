#include "latmass/arith.hpp"

#include <algorithm>

namespace latmass {

Rat parse_rational(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw InvalidInput("cannot parse rational: " + s);
    if (q.get_den() == 0) throw InvalidInput("rational with zero denominator: " + s);
    q.canonicalize();
    if (q.get_den() <= 0) throw InvalidInput("rational with nonpositive denominator: " + s);
    return q;
}

double to_double(const Rat& q) { return q.get_d(); }

bool is_odd_prime(const Int& p) {
    if (p < 3 || p % 2 == 0) return false;
    return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

static void require_odd_prime(const Int& p) {
    if (!is_odd_prime(p)) throw InvalidPrime("not an odd prime: " + p.get_str());
}

Valuation ord(const Int& p, const Int& n) {
    require_odd_prime(p);
    if (n == 0) return Valuation::infinity();
    Int m = abs(n);
    unsigned long e = 0;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    return Valuation(e);
}

int legendre(const Int& a, const Int& p) {
    require_odd_prime(p);
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

Int delta(const Int& p) {
    require_odd_prime(p);
    return legendre(Int(-1), p) * p;
}

std::vector<std::pair<Int, unsigned long>> factorize(const Int& n, const Int& divisor_ceiling) {
    if (n <= 0) throw InvalidInput("factorize requires n >= 1");
    std::vector<std::pair<Int, unsigned long>> out;
    Int m = n;
    auto strip = [&](const Int& d) {
        unsigned long e = 0;
        while (m % d == 0) {
            m /= d;
            ++e;
        }
        if (e > 0) out.emplace_back(d, e);
    };
    strip(Int(2));
    for (Int d = 3; d * d <= m && d <= divisor_ceiling; d += 2) strip(d);
    if (m > 1) {
        if (mpz_probab_prime_p(m.get_mpz_t(), 40) == 0)
            throw TooLarge("composite cofactor exceeds trial-division ceiling: " + m.get_str());
        out.emplace_back(m, 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

RationalInterval pow_interval(const Int& p, const Rat& e, const Rat& width) {
    if (p <= 0) throw InvalidInput("pow_interval requires a positive base");
    if (width <= 0) throw InvalidInput("pow_interval requires positive width");

    const Int num = e.get_num();
    const Int den = e.get_den();

    if (num < 0) {
        // p^e = 1 / p^(-e); refine until the reciprocal interval is narrow enough.
        Rat w = width;
        for (;;) {
            RationalInterval inv = pow_interval(p, -e, w);
            if (inv.lo > 0) {
                RationalInterval r(Rat(1) / inv.hi, Rat(1) / inv.lo);
                if (r.width() <= width) return r;
            }
            w /= 16;
        }
    }

    if (!num.fits_ulong_p() || !den.fits_ulong_p())
        throw InvalidInput("pow_interval exponent out of range");
    const unsigned long n = num.get_ui();
    const unsigned long d = den.get_ui();

    const Int target = ipow(p, n);  // seek the d-th root of this
    if (d == 1) return RationalInterval::point(Rat(target));

    // Integer part of the root as a bisection seed.
    Int root;
    mpz_root(root.get_mpz_t(), target.get_mpz_t(), d);
    Rat lo(root), hi(root + 1);
    if (ipow(root, d) == target) return RationalInterval::point(lo);

    while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        // mid^d <= p^n, cross-multiplied to integers.
        if (ipow(mid.get_num(), d) <= target * ipow(mid.get_den(), d))
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace latmass
