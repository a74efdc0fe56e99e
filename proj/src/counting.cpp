#include "latmass/counting.hpp"

#include <algorithm>

namespace latmass {

namespace {

Rat rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

void validate(const CountQuery& q) {
    if (!is_odd_prime(q.p)) throw InvalidPrime("counting requires an odd prime, got " + q.p.get_str());
    if (q.k < 1) throw InvalidInput("k must be at least 1");
    if (q.u.size() != q.form.rank()) throw InvalidInput("shift vector rank mismatch");
    for (std::size_t j : q.S)
        if (j >= q.form.rank()) throw InvalidInput("S index out of range");
    if (q.r >= 1) {
        const bool primitive =
            std::any_of(q.u.begin(), q.u.end(), [&](const Int& c) { return c % q.p != 0; });
        if (!primitive) throw NotPrimitive("u must be primitive when r >= 1");
    }
}

unsigned long long upow(unsigned long long b, unsigned long e) {
    unsigned long long r = 1;
    while (e--) r *= b;
    return r;
}

unsigned long mod_pk(const Int& v, unsigned long long pk) {
    Int m = v % static_cast<unsigned long>(pk);
    if (m < 0) m += static_cast<unsigned long>(pk);
    return m.get_ui();
}

// Allowed residues mod p^k for one coordinate under the S / r constraints.
std::vector<unsigned long> coordinate_domain(const CountQuery& q, std::size_t j, unsigned long long p,
                                             unsigned long long pk) {
    std::vector<unsigned long> xs;
    const bool unit_required = q.S.count(j) > 0;
    if (q.r >= q.k && q.r >= 1) {
        const unsigned long x = mod_pk(q.u[j], pk);
        if (!unit_required || x % p != 0) xs.push_back(x);
        return xs;
    }
    if (q.r >= 1) {
        const unsigned long long pr = upow(p, q.r);
        const unsigned long long steps = pk / pr;
        const unsigned long u0 = mod_pk(q.u[j], pk);
        for (unsigned long long y = 0; y < steps; ++y) {
            const unsigned long x = static_cast<unsigned long>((u0 + y * pr) % pk);
            if (!unit_required || x % p != 0) xs.push_back(x);
        }
        return xs;
    }
    for (unsigned long long x = 0; x < pk; ++x)
        if (!unit_required || x % p != 0) xs.push_back(static_cast<unsigned long>(x));
    return xs;
}

}  // namespace

CountResult count_oracle(const CountQuery& q, unsigned long long ceiling) {
    validate(q);
    const std::size_t ell = q.form.rank();
    if (ipow(q.p, q.k * ell) > Int(static_cast<unsigned long>(ceiling))) throw TooLarge("oracle grid p^(k*l) exceeds ceiling");
    const unsigned long long p = q.p.get_ui();
    const unsigned long long pk = upow(p, q.k);
    const unsigned long target = mod_pk(q.form.evaluate(q.u), pk);
    const bool primitivity = q.S.empty() && q.r == 0;

    // Per coordinate: allowed residues with their contributions a_j x^2 mod p^k.
    struct Entry {
        unsigned long contrib;
        bool div_by_p;
    };
    std::vector<std::vector<Entry>> table(ell);
    for (std::size_t j = 0; j < ell; ++j) {
        const unsigned long aj = mod_pk(q.form.coefficients[j], pk);
        for (unsigned long x : coordinate_domain(q, j, p, pk)) {
            const unsigned long long sq = (static_cast<unsigned long long>(x) * x) % pk;
            table[j].push_back({static_cast<unsigned long>((aj * sq) % pk), x % p == 0});
        }
    }

    unsigned long long count = 0;
    // Depth-first over coordinates, carrying the partial sum mod p^k.
    auto rec = [&](auto&& self, std::size_t j, unsigned long sum, bool all_div) -> void {
        if (j == ell) {
            if (sum == target && !(primitivity && all_div)) ++count;
            return;
        }
        for (const Entry& e : table[j]) {
            unsigned long s = sum + e.contrib;
            if (s >= pk) s -= pk;
            self(self, j + 1, s, all_div && e.div_by_p);
        }
    };
    rec(rec, 0, 0, true);
    return {Int(static_cast<unsigned long>(count)), CountMethod::ORACLE, std::nullopt};
}

namespace {

using Dist = std::vector<unsigned long long>;

Dist convolve(const Dist& a, const Dist& b) {
    const std::size_t n = a.size();
    Dist out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        const unsigned long long ai = a[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            std::size_t k = i + j;
            if (k >= n) k -= n;
            out[k] += ai * b[j];
        }
    }
    return out;
}

// Unrestricted count of Q(x) = m mod p^k over (Z/p^k)^l, including pL.
unsigned long long full_count(const DiagonalForm& form, unsigned long long p, unsigned long kk, const Int& m) {
    if (kk == 0) return 1;
    const unsigned long long pk = upow(p, kk);
    Dist total(pk, 0);
    total[0] = 1;
    for (std::size_t j = 0; j < form.rank(); ++j) {
        const unsigned long aj = mod_pk(form.coefficients[j], pk);
        Dist dj(pk, 0);
        for (unsigned long long x = 0; x < pk; ++x)
            dj[(aj * ((x * x) % pk)) % pk]++;
        total = convolve(total, dj);
    }
    return total[mod_pk(m, pk)];
}

}  // namespace

CountResult count_convolution(const CountQuery& q, unsigned long long ceiling) {
    validate(q);
    const std::size_t ell = q.form.rank();
    if (ipow(q.p, q.k) > Int(static_cast<unsigned long>(ceiling))) throw TooLarge("convolution modulus p^k exceeds ceiling");
    // Bucket counts live in 64-bit accumulators.
    if (ipow(q.p, q.k * ell) >= ipow(Int(2), 62)) throw TooLarge("count would overflow accumulators");

    const unsigned long long p = q.p.get_ui();
    const unsigned long long pk = upow(p, q.k);
    const Int m = q.form.evaluate(q.u);

    Dist total(pk, 0);
    total[0] = 1;
    for (std::size_t j = 0; j < ell; ++j) {
        const unsigned long aj = mod_pk(q.form.coefficients[j], pk);
        Dist dj(pk, 0);
        for (unsigned long x : coordinate_domain(q, j, p, pk))
            dj[(aj * ((static_cast<unsigned long long>(x) * x) % pk)) % pk]++;
        total = convolve(total, dj);
    }
    unsigned long long count = total[mod_pk(m, pk)];

    if (q.S.empty() && q.r == 0) {
        // Remove x in pL: for k >= 2 these biject with Q(y) = m/p^2 mod p^(k-2).
        unsigned long long in_pl = 0;
        if (q.k == 1) {
            in_pl = (m % q.p == 0) ? 1 : 0;
        } else if (m % (q.p * q.p) == 0) {
            in_pl = upow(p, ell) * full_count(q.form, p, q.k - 2, m / (q.p * q.p));
        }
        count -= in_pl;
    }
    return {Int(static_cast<unsigned long>(count)), CountMethod::CONVOLUTION, std::nullopt};
}

CountResult count_auto(const CountQuery& q) {
    try {
        return count_convolution(q);
    } catch (const TooLarge&) {
        return count_oracle(q);
    }
}

std::vector<std::size_t> valid_pivots(const DiagonalForm& form, const std::vector<Int>& u, const Int& p) {
    if (u.size() != form.rank()) throw InvalidInput("shift vector rank mismatch");
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < form.rank(); ++j)
        if (form.coefficients[j] % p != 0 && u[j] % p != 0) out.push_back(j);
    return out;
}

Rat cp_coefficient(const Int& m, const Int& p, unsigned long t_p, unsigned long r_p) {
    if (!is_odd_prime(p)) throw InvalidPrime();
    if (r_p > 1) throw UndefinedBranch("r_p must be 0 or 1");
    const bool m_unit = m % p != 0;
    const bool t_odd = t_p % 2 == 1;
    const Int den = p - 1;
    if (m_unit) {
        if (t_odd)
            return r_p == 0 ? rat(1 + p * legendre(m, p), den) : rat(1 - p * legendre(m, p), den);
        return r_p == 0 ? rat(-1 - legendre(-m, p), den) : rat(1 - legendre(-m, p), den);
    }
    if (t_odd) return Rat(-1);
    return r_p == 0 ? Rat(1) : Rat(-1);
}

CountResult closed_form_pivot_count(const CountQuery& q, std::size_t pivot) {
    validate(q);
    if (q.r != 0 || q.S != std::set<std::size_t>{pivot})
        throw InvalidInput("closed form applies to S = {pivot}, r = 0");
    if (pivot >= q.form.rank()) throw InvalidInput("pivot index out of range");
    if (q.form.coefficients[pivot] % q.p == 0 || q.u[pivot] % q.p == 0)
        throw NoPivot("pivot needs p dividing neither a_j nor u_j");

    const Int m = q.form.evaluate(q.u);
    const bool m_unit = m % q.p != 0;
    if (!m_unit && q.form.determinant() % q.p == 0)
        throw HypothesisViolated("closed form needs p coprime to m or to all coefficients");

    const unsigned long ell = static_cast<unsigned long>(q.form.rank());
    unsigned long t_p = 0;
    Int cofactor_units = 1;  // product of unit coefficients excluding the pivot
    for (std::size_t j = 0; j < q.form.rank(); ++j)
        if (q.form.coefficients[j] % q.p != 0) {
            ++t_p;
            if (j != pivot) cofactor_units *= q.form.coefficients[j];
        }
    const unsigned long r_p = legendre(q.form.coefficients[pivot], q.p) == -1 ? 1 : 0;
    // Character of the non-pivot unit coefficients; scales the Gauss-sum
    // term and is verified against the enumeration oracle by the grid.
    const int chi = legendre(cofactor_units, q.p);

    const Rat cp = cp_coefficient(m, q.p, t_p, r_p);
    const Rat delta_pow = rat(chi * ipow(delta(q.p), t_p / 2), ipow(q.p, t_p));
    Rat value = Rat(ipow(q.p, (ell - 1) * (q.k - 1)) * ipow(q.p, ell));
    value *= rat(q.p - 1, q.p);
    value *= rat(1, q.p) + delta_pow * cp;
    value.canonicalize();
    if (value.get_den() != 1) throw Error("closed form did not produce an integer: " + value.get_str());
    return {value.get_num(), CountMethod::CLOSED_FORM, pivot};
}

Rat lower_bound_unit(unsigned long ell, const Int& p, unsigned long k, bool p_divides_m, unsigned long t_p) {
    if (!is_odd_prime(p)) throw InvalidPrime();
    if (k < 1 || ell < 1) throw InvalidInput("need k >= 1 and l >= 1");
    const Rat lead(ipow(p, (ell - 1) * k));
    const Rat one_minus = rat(p - 1, p);
    if (!p_divides_m) {
        const Rat tail = (p == 3) ? Rat(1, 3) : Rat(1) - rat(2, p - 1);
        return lead * one_minus * tail;
    }
    if (t_p < 3) throw HypothesisViolated("p | m requires t_p >= 3");
    return lead * one_minus * one_minus;
}

Rat lower_bound_shifted(unsigned long ell, unsigned long d, unsigned long r, const Int& p, unsigned long k) {
    if (!is_odd_prime(p)) throw InvalidPrime();
    const unsigned long dr = std::max(d, r);
    if (k < dr) throw HypothesisViolated("need k >= max{depth, r}");
    return Rat(ipow(p, (ell - 1) * (k - dr)));
}

}  // namespace latmass
