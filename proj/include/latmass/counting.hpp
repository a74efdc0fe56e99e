#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "latmass/padic.hpp"

namespace latmass {

/// A congruence counting problem: solutions x in (Z/p^k)^l of
/// Q(x) = Q(u) mod p^k, subject to
///   - S empty, r = 0:  x primitive (x not in pL) -- the set R(Q;u,p^k),
///   - S empty, r >= 1: x = u mod p^r             -- the set R(Q;u,r,p^k),
///   - S nonempty:      p does not divide x_j for j in S (plus x = u mod p^r
///                      when r >= 1) -- the sets R_S.
/// Indices in S are 0-based.
struct CountQuery {
    DiagonalForm form;
    std::vector<Int> u;
    std::set<std::size_t> S;
    unsigned long r = 0;
    Int p;
    unsigned long k = 1;
};

enum class CountMethod { ORACLE, CONVOLUTION, CLOSED_FORM };

struct CountResult {
    Int count;
    CountMethod method;
    std::optional<std::size_t> pivot;
};

inline constexpr unsigned long long kOracleCeiling = 100'000'000ULL;        // on p^(k*l)
inline constexpr unsigned long long kConvolutionCeiling = 19683ULL;         // on p^k

/// Exact count by full enumeration of (Z/p^k)^l.
CountResult count_oracle(const CountQuery& q, unsigned long long ceiling = kOracleCeiling);

/// Exact count by per-coordinate distribution of a_j x_j^2 convolved
/// across coordinates; agrees with count_oracle everywhere.
CountResult count_convolution(const CountQuery& q, unsigned long long ceiling = kConvolutionCeiling);

/// Convolution first, oracle as fallback.
CountResult count_auto(const CountQuery& q);

/// Indices j with p dividing neither a_j nor u_j.
std::vector<std::size_t> valid_pivots(const DiagonalForm& form, const std::vector<Int>& u, const Int& p);

/// r_{{j}}(Q; u, p^k) for a valid pivot j, in closed form.
CountResult closed_form_pivot_count(const CountQuery& q, std::size_t pivot);

/// The case coefficient C_p(m, t_p, r_p).
Rat cp_coefficient(const Int& m, const Int& p, unsigned long t_p, unsigned long r_p);

/// Lower bound for r(Q;u,p^k) when p does not divide m, or p | m with t_p >= 3.
Rat lower_bound_unit(unsigned long ell, const Int& p, unsigned long k, bool p_divides_m, unsigned long t_p);

/// Lower bound p^{(l-1)(k - max{d,r})} for r(Q;u,r,p^k), valid for k >= max{d,r}.
Rat lower_bound_shifted(unsigned long ell, unsigned long d, unsigned long r, const Int& p, unsigned long k);

}  // namespace latmass
