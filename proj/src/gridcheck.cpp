#include "latmass/gridcheck.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace latmass {

namespace {

Int smallest_nonresidue(const Int& p) {
    for (Int n = 2;; ++n)
        if (legendre(n, p) == -1) return n;
}

std::string cell_name(const GridCell& c) {
    std::ostringstream os;
    os << "p=" << c.p << " k=" << c.k << " a=(";
    for (std::size_t j = 0; j < c.form.rank(); ++j) os << (j ? "," : "") << c.form.coefficients[j];
    os << ") u=(";
    for (std::size_t j = 0; j < c.u.size(); ++j) os << (j ? "," : "") << c.u[j];
    os << ")";
    return os.str();
}

}  // namespace

std::vector<GridCell> build_grid(const GridOptions& opt) {
    std::vector<GridCell> cells;
    for (unsigned long pv : opt.primes) {
        const Int p(pv);
        const Int nr = smallest_nonresidue(p);
        for (unsigned long ell : opt.ells) {
            // Coefficient templates: vary t_p across both parities and the
            // residue class of the lead unit.
            std::vector<std::vector<Int>> coeff_sets;
            for (unsigned long nonunits = 0; nonunits + 1 <= ell && nonunits <= 2; ++nonunits) {
                for (int lead_nr = 0; lead_nr < 2; ++lead_nr) {
                    std::vector<Int> a(ell, Int(1));
                    if (lead_nr) a[0] = nr;
                    for (unsigned long i = 0; i < nonunits; ++i) a[ell - 1 - i] = p;
                    coeff_sets.push_back(a);
                }
            }
            // All-unit coefficient vectors whose sum is divisible by p, so
            // the shift u = (1,..,1) lands in the p | m branches of C_p.
            auto pm_coeffs = [&](const Int& lead) {
                std::vector<Int> a(ell, Int(1));
                a[0] = lead;
                Int sum = lead + Int(ell - 1);
                const Int need = (p - sum % p) % p;
                if (need == p - 1) {
                    a[1] = 2;
                    a[2] = p - 1;
                } else if (need != 0) {
                    a[1] = 1 + need;
                }
                return a;
            };
            coeff_sets.push_back(pm_coeffs(Int(1)));
            coeff_sets.push_back(pm_coeffs(nr));
            std::vector<std::vector<Int>> shifts;
            {
                std::vector<Int> e1(ell, Int(0)), e2(ell, Int(0)), ones(ell, Int(1)), mixed(ell, Int(0)),
                    split(ell, Int(0)), last(ell, Int(0));
                e1[0] = 1;
                e2[1] = 1;
                mixed[0] = 2;
                mixed[1] = 1;
                split[0] = 1;
                split[ell - 1] = p;  // primitive with a p-divisible tail entry
                last[ell - 1] = 1;
                shifts = {e1, e2, ones, mixed, split, last};
            }
            for (unsigned long k : opt.ks) {
                if (opt.max_pk != 0 && ipow(p, k) > Int(static_cast<unsigned long>(opt.max_pk))) continue;
                for (const auto& a : coeff_sets)
                    for (const auto& u : shifts) cells.push_back({DiagonalForm(a), u, p, k});
            }
        }
    }
    return cells;
}

int cp_branch(const Int& m, const Int& p, unsigned long t_p, unsigned long r_p) {
    const bool m_unit = m % p != 0;
    const bool t_odd = t_p % 2 == 1;
    if (m_unit) return t_odd ? (r_p == 0 ? 1 : 2) : (r_p == 0 ? 3 : 4);
    if (t_odd) return 5;
    return r_p == 0 ? 6 : 7;
}

void VerifySummary::merge(const VerifySummary& o) {
    cells += o.cells;
    for (const auto& [k, v] : o.checks) checks[k] += v;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    cp_branches_seen.insert(o.cp_branches_seen.begin(), o.cp_branches_seen.end());
    tight_bound_seen = tight_bound_seen || o.tight_bound_seen;
}

namespace {

void check_cell(const GridCell& cell, const GridOptions& opt, VerifySummary& s) {
    const Int& p = cell.p;
    const unsigned long ell = static_cast<unsigned long>(cell.form.rank());
    const Int m = cell.form.evaluate(cell.u);
    const bool u_primitive = std::any_of(cell.u.begin(), cell.u.end(), [&](const Int& c) { return c % p != 0; });
    ++s.cells;

    auto fail = [&](const std::string& what) { s.violations.push_back(what + " at " + cell_name(cell)); };
    auto pass = [&](const std::string& what) { ++s.checks[what]; };

    auto oracle = [&](const std::set<std::size_t>& S, unsigned long r) {
        CountQuery q{cell.form, cell.u, S, r, p, cell.k};
        return count_oracle(q, opt.oracle_ceiling).count;
    };
    auto convolution = [&](const std::set<std::size_t>& S, unsigned long r) {
        CountQuery q{cell.form, cell.u, S, r, p, cell.k};
        return count_convolution(q).count;
    };

    std::set<std::size_t> unit_support;  // I_{u,p}
    for (std::size_t j = 0; j < cell.u.size(); ++j)
        if (cell.u[j] % p != 0) unit_support.insert(j);

    // Convolution vs oracle over r in {0,1} and S in {empty, I_{u,p}}.
    std::vector<unsigned long> rs{0};
    if (u_primitive) rs.push_back(1);
    for (unsigned long r : rs)
        for (const auto& S : {std::set<std::size_t>{}, unit_support}) {
            if (oracle(S, r) == convolution(S, r))
                pass("convolution_vs_oracle");
            else
                fail("convolution != oracle (S=" + std::to_string(S.size()) + ", r=" + std::to_string(r) + ")");
        }

    // Monotonicity of the r-restricted count.
    if (u_primitive) {
        if (oracle({}, 1) <= oracle({}, 0))
            pass("count_monotone_in_r");
        else
            fail("count increased in r");
    }

    // Closed form vs oracle for every valid pivot, plus bound soundness.
    const Int full = oracle({}, 0);
    unsigned long t_p = 0;
    for (const Int& a : cell.form.coefficients)
        if (a % p != 0) ++t_p;
    for (std::size_t j : valid_pivots(cell.form, cell.u, p)) {
        CountQuery q{cell.form, cell.u, {j}, 0, p, cell.k};
        const bool hypothesis = m % p != 0 || cell.form.determinant() % p != 0;
        if (!hypothesis) continue;
        const Int cf = closed_form_pivot_count(q, j).count;
        const Int orc = oracle({j}, 0);
        if (cf == orc)
            pass("closed_form_vs_oracle");
        else
            fail("closed form " + cf.get_str() + " != oracle " + orc.get_str() + " (pivot " + std::to_string(j) + ")");

        const unsigned long r_p = legendre(cell.form.coefficients[j], p) == -1 ? 1 : 0;
        s.cp_branches_seen.insert(cp_branch(m, p, t_p, r_p));
        const Rat cp = cp_coefficient(m, p, t_p, r_p);
        if (Rat(-1) <= cp && cp <= Rat(Int(p + 1), Int(p - 1)))
            pass("cp_range");
        else
            fail("C_p out of range: " + cp.get_str());

        // Lemma bound never exceeds the pivot count (nor the full count).
        if (m % p != 0 || t_p >= 3) {
            const Rat lb = lower_bound_unit(ell, p, cell.k, m % p == 0, t_p);
            if (lb <= Rat(cf) && lb <= Rat(full))
                pass("unit_bound_sound");
            else
                fail("unit bound " + lb.get_str() + " exceeds count " + cf.get_str());
            if (Rat(cf) == lb) s.tight_bound_seen = true;
        }
    }

    if (u_primitive) {
        LocalContext ctx = LocalContext::make(cell.form, p);
        LocalVector uv = make_local_vector(ctx, cell.u, default_precision(ctx, cell.k + 2));
        const unsigned long d = depth(ctx, uv);

        // Shifted bound soundness for r in {1, .., k} with k >= max{d, r}.
        for (unsigned long r = 1; r <= cell.k; ++r) {
            if (cell.k < std::max(d, r)) continue;
            const Rat lb = lower_bound_shifted(ell, d, r, p, cell.k);
            if (lb <= Rat(oracle({}, r)))
                pass("shifted_bound_sound");
            else
                fail("shifted bound exceeds count at r=" + std::to_string(r));
        }

        // Lifting identity above the depth.
        if (cell.k > d) {
            for (unsigned long r : {0UL, 1UL}) {
                const Int lhs = oracle(unit_support, r);
                const Int rhs = ipow(p, ell - 1) * [&] {
                    CountQuery q{cell.form, cell.u, unit_support, r, p, cell.k - 1};
                    return count_oracle(q, opt.oracle_ceiling).count;
                }();
                if (lhs == rhs)
                    pass("lifting_identity");
                else
                    fail("lifting identity failed at r=" + std::to_string(r));
            }
        }

        // Mass-bound chain with conductor c = p^k.
        if (ell >= 3 && m != 0) {
            Int g = 0;
            for (const Int& x : cell.u) g = gcd(g, x);
            if (g == 1) {
                ShiftedLatticeSpec spec{cell.form, cell.u, ipow(p, cell.k)};
                if (classify_primes(spec).omega2.empty()) {
                    const Rat lhs = Rat(full) / 2;
                    const Rat rhs = Rat(ipow(p, (ell - 1) * cell.k)) * f_factor(p);
                    if (lhs >= rhs)
                        pass("mass_chain");
                    else
                        fail("r/2 < p^((l-1)k) f_p");
                }
            }
        }
    }
}

}  // namespace

VerifySummary run_verify(const GridOptions& opt) {
    const auto cells = build_grid(opt);
    const unsigned jobs = std::max(1u, opt.jobs);
    std::vector<VerifySummary> partial(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < cells.size(); i += jobs) check_cell(cells[i], opt, partial[w]);
        });
    for (auto& t : workers) t.join();
    VerifySummary out;
    for (const auto& ps : partial) out.merge(ps);
    std::sort(out.violations.begin(), out.violations.end());
    return out;
}

}  // namespace latmass
