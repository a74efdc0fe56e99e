#include "latmass/padic.hpp"

#include <algorithm>
#include <stdexcept>

namespace latmass {

DiagonalForm::DiagonalForm(std::vector<Int> coeffs) : coefficients(std::move(coeffs)) {
    if (coefficients.empty()) throw InvalidInput("diagonal form needs rank >= 1");
    for (const Int& a : coefficients)
        if (a == 0) throw InvalidInput("diagonal form coefficients must be nonzero");
}

Int DiagonalForm::determinant() const {
    Int d = 1;
    for (const Int& a : coefficients) d *= a;
    return d;
}

bool DiagonalForm::is_positive_definite() const {
    return std::all_of(coefficients.begin(), coefficients.end(), [](const Int& a) { return a > 0; });
}

Int DiagonalForm::evaluate(const std::vector<Int>& x) const {
    if (x.size() != rank()) throw InvalidInput("vector rank mismatch");
    Int q = 0;
    for (std::size_t j = 0; j < rank(); ++j) q += coefficients[j] * x[j] * x[j];
    return q;
}

LocalContext LocalContext::make(DiagonalForm form, const Int& p) {
    if (!is_odd_prime(p)) throw InvalidPrime("local context requires an odd prime, got " + p.get_str());
    LocalContext ctx{p, std::move(form)};
    ctx.delta_p = delta(p);
    for (std::size_t j = 0; j < ctx.form.rank(); ++j) {
        const unsigned long e = ord(p, ctx.form.coefficients[j]).value();
        ctx.exponents.push_back(e);
        ctx.units.push_back(ctx.form.coefficients[j] / ipow(p, e));
        ctx.max_exponent = std::max(ctx.max_exponent, e);
        if (e == 0) ctx.unit_indices.push_back(j);
    }
    ctx.t_p = ctx.unit_indices.size();
    return ctx;
}

bool LocalVector::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Int& c) { return c == 0; });
}

bool LocalVector::is_primitive(const Int& p) const {
    return std::any_of(coords.begin(), coords.end(), [&](const Int& c) { return c % p != 0; });
}

LocalVector make_local_vector(const LocalContext& ctx, std::vector<Int> coords, unsigned long precision) {
    if (coords.size() != ctx.form.rank()) throw InvalidInput("vector rank mismatch");
    if (precision == 0) throw InvalidInput("working precision must be positive");
    const Int mod = ipow(ctx.p, precision);
    for (Int& c : coords) {
        c %= mod;
        if (c < 0) c += mod;
    }
    return LocalVector{std::move(coords), precision};
}

unsigned long default_precision(const LocalContext& ctx, unsigned long depth) {
    return ctx.max_exponent + depth + 2;
}

// Valuation of a reduced representative; nullopt means >= K.
static std::optional<unsigned long> coord_ord(const Int& p, const Int& c) {
    if (c == 0) return std::nullopt;
    Int m = c;
    unsigned long e = 0;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    return e;
}

static Valuation order_impl(const LocalContext& ctx, unsigned long r, const LocalVector& x) {
    if (x.coords.size() != ctx.form.rank()) throw InvalidInput("vector rank mismatch");
    std::optional<unsigned long> best;
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
        const auto v = coord_ord(ctx.p, x.coords[j]);
        if (!v) continue;
        const unsigned long term = std::max(ctx.exponents[j], r) + *v;
        if (!best || term < *best) best = term;
    }
    if (!best) {
        if (x.is_zero()) return Valuation::infinity();
        throw PrecisionError();
    }
    if (*best >= x.precision) throw PrecisionError();
    return Valuation(*best);
}

Valuation order(const LocalContext& ctx, const LocalVector& x) { return order_impl(ctx, 0, x); }

Valuation sublattice_order(const LocalContext& ctx, unsigned long r, const LocalVector& x) {
    return order_impl(ctx, r, x);
}

std::vector<unsigned long> critical_indices(const LocalContext& ctx, const LocalVector& x) {
    if (x.is_zero()) throw InvalidInput("critical indices of the zero vector");
    // No jumps can occur past max_exponent: every term then grows with r.
    std::vector<unsigned long> vals;  // v(L^(r); x) for r = 0 .. max_e + 1
    for (unsigned long r = 0; r <= ctx.max_exponent + 1; ++r)
        vals.push_back(sublattice_order(ctx, r, x).value());
    std::vector<unsigned long> out;
    for (unsigned long r = 0; r <= ctx.max_exponent; ++r) {
        const bool jump = vals[r] < vals[r + 1];
        if (r == 0 ? jump : (vals[r - 1] == vals[r] && jump)) out.push_back(r);
    }
    return out;
}

unsigned long depth(const LocalContext& ctx, const LocalVector& u) {
    if (u.coords.size() != ctx.form.rank()) throw InvalidInput("vector rank mismatch");
    std::optional<unsigned long> best;
    for (std::size_t j = 0; j < u.coords.size(); ++j) {
        if (u.coords[j] % ctx.p == 0) continue;
        const unsigned long d = ctx.exponents[j] + 1;
        if (!best || d < *best) best = d;
    }
    if (!best) throw NotPrimitive();
    return *best;
}

std::optional<unsigned long> is_simple(const LocalContext& ctx, const LocalVector& x) {
    if (x.is_zero()) throw InvalidInput("simplicity of the zero vector");
    const unsigned long r = order(ctx, x).value();
    if (sublattice_order(ctx, r, x).value() == r) return r;
    return std::nullopt;
}

std::vector<JamesSummand> james_decompose(const LocalContext& ctx, const LocalVector& x) {
    if (!x.is_primitive(ctx.p)) throw NotPrimitive();
    const auto crit = critical_indices(ctx, x);
    const std::size_t s = crit.size();

    std::vector<unsigned long> powers;  // b_t = v(L^(r_t); x) - r_t
    std::vector<unsigned long> levels;  // v(L^(r_t); x) = r_t + b_t, strictly increasing in t
    for (unsigned long r : crit) {
        const unsigned long v = sublattice_order(ctx, r, x).value();
        powers.push_back(v - r);
        levels.push_back(v);
    }

    // Coordinate j contributes at level e_j + ord_p(x_j).  It joins the last
    // summand whose level it reaches, so each lambda_t keeps order r_t after
    // dividing by p^{b_t}; grouping by e_j alone can place a low-level
    // coordinate into a high-index summand and destroy simplicity.
    std::vector<std::vector<Int>> parts(s, std::vector<Int>(x.coords.size(), Int(0)));
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
        if (x.coords[j] == 0) continue;
        const unsigned long level = ctx.exponents[j] + *coord_ord(ctx.p, x.coords[j]);
        std::size_t t = 0;
        while (t + 1 < s && levels[t + 1] <= level) ++t;
        if (*coord_ord(ctx.p, x.coords[j]) < powers[t])
            throw std::logic_error("james_decompose: coordinate below summand power");
        parts[t][j] = x.coords[j] / ipow(ctx.p, powers[t]);
    }

    std::vector<JamesSummand> out;
    for (std::size_t t = 0; t < s; ++t)
        out.push_back({powers[t], LocalVector{std::move(parts[t]), x.precision}, crit[t]});
    return out;
}

AssocResult are_associated(const LocalContext& ctx, const LocalVector& x, const LocalVector& y) {
    if (x.is_zero() || y.is_zero()) throw InvalidInput("associateness of a zero vector");
    const unsigned long prec = std::min(x.precision, y.precision);
    const Int mod = ipow(ctx.p, prec);
    const Int qx = ((ctx.form.evaluate(x.coords) % mod) + mod) % mod;
    const Int qy = ((ctx.form.evaluate(y.coords) % mod) + mod) % mod;

    // Isometries preserve Q, so a mismatch visible at precision is decisive.
    if (qx != qy) return AssocResult::NO;

    // Identical vectors at the compared precision: the identity works.
    {
        bool equal = true;
        for (std::size_t j = 0; j < x.coords.size() && equal; ++j)
            equal = (x.coords[j] - y.coords[j]) % mod == 0;
        if (equal) return AssocResult::YES;
    }

    if (qx != 0 && coord_ord(ctx.p, qx) == 0u) return AssocResult::YES;

    const auto sx = is_simple(ctx, x);
    const auto sy = is_simple(ctx, y);
    if (sx && sy) return *sx == *sy ? AssocResult::YES : AssocResult::NO;
    if (sx.has_value() != sy.has_value()) return AssocResult::NO;

    if (ctx.is_unimodular() && x.is_primitive(ctx.p) && y.is_primitive(ctx.p)) return AssocResult::YES;

    return AssocResult::UNKNOWN;
}

}  // namespace latmass
