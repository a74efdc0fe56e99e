#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latmass/mass.hpp"

namespace latmass {

/// Per-rank extrema over the class-number-one lattices: the largest
/// 1/m(L) and the largest determinant.
struct RankConstants {
    unsigned long rank;
    Int inv_mass_max;
    Int det_max;
};

const std::vector<RankConstants>& rank_constants_table();
RankConstants rank_constants(unsigned long ell);

/// FNV-1a over the canonical row serialization; pinned in the data file.
std::uint64_t rank_constants_checksum();

struct ConductorBound {
    unsigned long rank;
    Rat delta;
    RationalInterval threshold;  // B with c^(l-1-delta) <= B
    Int c_max;
};

/// Largest odd c with c^(l-1-delta) <= inv_mass_max / c_lo, decided by
/// exact integer cross-multiplication.
ConductorBound max_odd_conductor(unsigned long ell, const Rat& delta, const Rat& c_lo);

/// The eight (rank, c_max) rows for l = 3..10.
std::vector<std::pair<unsigned long, Int>> table1(const Rat& delta, const Rat& c_lo);

}  // namespace latmass
