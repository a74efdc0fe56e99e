#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "latmass/arith.hpp"

namespace latmass {

/// Rank-l diagonal integral quadratic form a_1 x_1^2 + ... + a_l x_l^2.
struct DiagonalForm {
    std::vector<Int> coefficients;

    explicit DiagonalForm(std::vector<Int> coeffs);

    std::size_t rank() const { return coefficients.size(); }
    Int determinant() const;
    bool is_positive_definite() const;
    Int evaluate(const std::vector<Int>& x) const;
};

/// Per-prime data of a diagonal form: exponents e_j = ord_p(a_j), the
/// unit parts a_j / p^e_j, the unit index set I_p and Delta_p.
struct LocalContext {
    Int p;
    DiagonalForm form;
    std::vector<unsigned long> exponents;
    std::vector<Int> units;
    std::vector<std::size_t> unit_indices;  // I_p, 0-based
    std::size_t t_p = 0;
    Int delta_p;
    unsigned long max_exponent = 0;

    static LocalContext make(DiagonalForm form, const Int& p);

    bool is_unimodular() const { return max_exponent == 0; }
};

/// Z_p vector held as integer representatives modulo p^K.
struct LocalVector {
    std::vector<Int> coords;
    unsigned long precision = 0;  // K

    bool is_zero() const;
    bool is_primitive(const Int& p) const;
};

/// Builds a vector at precision K, reducing the coordinates mod p^K.
LocalVector make_local_vector(const LocalContext& ctx, std::vector<Int> coords, unsigned long precision);

/// Precision sufficient for comparisons up to `depth` beyond the largest
/// coefficient exponent.
unsigned long default_precision(const LocalContext& ctx, unsigned long depth);

/// v(L; x) = min_j (e_j + ord_p(x_j)).
Valuation order(const LocalContext& ctx, const LocalVector& x);

/// v(L^(r); x) = min_j (max(e_j, r) + ord_p(x_j)).
Valuation sublattice_order(const LocalContext& ctx, unsigned long r, const LocalVector& x);

/// Jump points of r -> v(L^(r); x), ascending.
std::vector<unsigned long> critical_indices(const LocalContext& ctx, const LocalVector& x);

/// d_{u,p} = min over j with p not dividing u_j of (e_j + 1).
unsigned long depth(const LocalContext& ctx, const LocalVector& u);

/// Index r with v(L;x) = v(L^(r);x) = r, if x is simple.
std::optional<unsigned long> is_simple(const LocalContext& ctx, const LocalVector& x);

struct JamesSummand {
    unsigned long power;   // b_j
    LocalVector vector;    // lambda_j, primitive and simple
    unsigned long index;   // r_j
};

/// x = sum_j p^{b_j} lambda_j with lambda_j simple of index r_j, the r_j
/// being exactly the critical indices of x.
std::vector<JamesSummand> james_decompose(const LocalContext& ctx, const LocalVector& x);

enum class AssocResult { YES, NO, UNKNOWN };

/// Decides associateness where the simple / unit-value / unimodular
/// criteria apply; UNKNOWN otherwise.
AssocResult are_associated(const LocalContext& ctx, const LocalVector& x, const LocalVector& y);

}  // namespace latmass
