#include "latmass/conductor.hpp"

namespace latmass {

const std::vector<RankConstants>& rank_constants_table() {
    static const std::vector<RankConstants> table = {
        {3, Int(48), Int(1728)},
        {4, Int(1152), Int(574992)},          // 2^4 * 3^3 * 11^3
        {5, Int(3840), Int(9834496)},         // 2^12 * 7^4
        {6, Int(103680), Int(6436343)},       // 23^5
        {7, Int(2903040), Int(191102976)},    // 2^18 * 3^6
        {8, Int("696729600"), Int(4782969)},  // 3^14
        {9, Int("1393459200"), Int(16777216)},    // 2^24
        {10, Int("8360755200"), Int(19683)},      // 3^9
    };
    return table;
}

RankConstants rank_constants(unsigned long ell) {
    if (ell < 3 || ell > 10) throw UnsupportedRank();
    return rank_constants_table()[ell - 3];
}

std::uint64_t rank_constants_checksum() {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& row : rank_constants_table()) {
        mix(std::to_string(row.rank));
        mix(":");
        mix(row.inv_mass_max.get_str());
        mix(":");
        mix(row.det_max.get_str());
        mix(";");
    }
    return h;
}

ConductorBound max_odd_conductor(unsigned long ell, const Rat& delta, const Rat& c_lo) {
    const RankConstants rc = rank_constants(ell);
    if (delta <= 0 || delta >= Rat(ell - 1)) throw InvalidInput("delta must lie in (0, l-1)");
    if (c_lo <= 0) throw InvalidInput("C_delta lower bound must be positive");

    Rat b = Rat(rc.inv_mass_max) / c_lo;
    b.canonicalize();
    const unsigned long n = delta.get_num().get_ui();
    const unsigned long d = delta.get_den().get_ui();
    const unsigned long exponent = (ell - 1) * d - n;  // c^exponent <= B^d
    const Int rhs = ipow(b.get_num(), d);
    const Int den_pow = ipow(b.get_den(), d);

    auto satisfies = [&](const Int& c) { return ipow(c, exponent) * den_pow <= rhs; };
    if (!satisfies(Int(1))) throw InvalidInput("no odd conductor satisfies the bound");

    Int hi = 1;
    while (satisfies(hi * 2)) hi *= 2;  // bracket, then bisect on odd values
    Int lo = hi, top = hi * 2;
    while (top - lo > 1) {
        Int mid = (lo + top) / 2;
        (satisfies(mid) ? lo : top) = mid;
    }
    Int c_max = (lo % 2 == 1) ? lo : lo - 1;
    return {ell, delta, RationalInterval::point(b), c_max};
}

std::vector<std::pair<unsigned long, Int>> table1(const Rat& delta, const Rat& c_lo) {
    std::vector<std::pair<unsigned long, Int>> rows;
    for (unsigned long ell = 3; ell <= 10; ++ell) rows.emplace_back(ell, max_odd_conductor(ell, delta, c_lo).c_max);
    return rows;
}

}  // namespace latmass
