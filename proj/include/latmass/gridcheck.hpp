#pragma once

#include <map>
#include <set>
#include <string>

#include "latmass/mass.hpp"

namespace latmass {

struct GridOptions {
    std::vector<unsigned long> primes{3, 5, 7};
    std::vector<unsigned long> ks{1, 2};
    std::vector<unsigned long> ells{3, 4};
    unsigned long long oracle_ceiling = kOracleCeiling;
    unsigned long long max_pk = 0;  // drop cells with p^k above this; 0 = no cap
    unsigned jobs = 1;
};

struct GridCell {
    DiagonalForm form;
    std::vector<Int> u;
    Int p;
    unsigned long k;
};

/// Deterministic grid of counting problems: coefficient vectors covering
/// every C_p branch and both t_p parities, crossed with shift patterns.
std::vector<GridCell> build_grid(const GridOptions& opt);

struct VerifySummary {
    unsigned long long cells = 0;
    std::map<std::string, unsigned long long> checks;  // per-property pass counts
    std::vector<std::string> violations;
    std::set<int> cp_branches_seen;  // 1..7
    bool tight_bound_seen = false;

    void merge(const VerifySummary& o);
    bool ok() const { return violations.empty(); }
};

/// Runs the full property grid: oracle vs convolution vs closed form,
/// bound lemmas, lifting identity, C_p range, mass-bound chain.
VerifySummary run_verify(const GridOptions& opt);

/// Which of the seven C_p branches a query falls in (1-based).
int cp_branch(const Int& m, const Int& p, unsigned long t_p, unsigned long r_p);

}  // namespace latmass
