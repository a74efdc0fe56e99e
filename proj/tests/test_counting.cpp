#include <doctest.h>

#include "latmass/counting.hpp"

using namespace latmass;

namespace {

CountQuery query(std::vector<Int> a, std::vector<Int> u, std::set<std::size_t> S, unsigned long r, long p,
                 unsigned long k) {
    return CountQuery{DiagonalForm(std::move(a)), std::move(u), std::move(S), r, Int(p), k};
}

}  // namespace

TEST_CASE("count_oracle frozen examples") {
    // Primitive solutions of x1^2+x2^2+x3^2 = 1 mod 3.
    CHECK(count_oracle(query({1, 1, 1}, {1, 0, 0}, {}, 0, 3, 1)).count == 6);
    // Restricting the first coordinate to units leaves (±1, 0, 0).
    CHECK(count_oracle(query({1, 1, 1}, {1, 0, 0}, {0}, 0, 3, 1)).count == 2);
    // r >= k pins x = u exactly.
    CHECK(count_oracle(query({1, 1, 1}, {1, 0, 0}, {}, 2, 3, 1)).count == 1);
    CHECK(count_oracle(query({1, 1, 1}, {1, 0, 0}, {}, 1, 3, 1)).count == 1);
}

TEST_CASE("count query validation") {
    CHECK_THROWS_AS(count_oracle(query({1, 1}, {1, 0}, {}, 0, 2, 1)), InvalidPrime);
    CHECK_THROWS_AS(count_oracle(query({1, 1}, {1, 0}, {}, 0, 3, 0)), InvalidInput);
    CHECK_THROWS_AS(count_oracle(query({1, 1}, {1}, {}, 0, 3, 1)), InvalidInput);
    CHECK_THROWS_AS(count_oracle(query({1, 1}, {1, 0}, {2}, 0, 3, 1)), InvalidInput);
    CHECK_THROWS_AS(count_oracle(query({1, 1}, {3, 0}, {}, 1, 3, 1)), NotPrimitive);
    CHECK_THROWS_AS(count_oracle(query({1, 1, 1}, {1, 0, 0}, {}, 0, 3, 9)), TooLarge);
    CHECK_THROWS_AS(count_convolution(query({1, 1}, {1, 0}, {}, 0, 3, 10)), TooLarge);
}

TEST_CASE("convolution equals oracle on spec cross-checks") {
    CHECK(count_convolution(query({1, 1, 1}, {1, 1, 1}, {}, 1, 3, 2)).count ==
          count_oracle(query({1, 1, 1}, {1, 1, 1}, {}, 1, 3, 2)).count);
    CHECK(count_convolution(query({1, 5}, {1, 0}, {0}, 0, 5, 2)).count ==
          count_oracle(query({1, 5}, {1, 0}, {0}, 0, 5, 2)).count);
    // Rank-2 sweep (the verify grid covers ranks 3 and 4).
    for (long p : {3L, 5L})
        for (unsigned long k = 1; k <= 2; ++k)
            for (long a0 : {1L, 2L, p})
                for (long u0 : {0L, 1L, 2L}) {
                    auto q = query({a0, 1}, {u0, 1}, {}, 0, p, k);
                    CHECK(count_convolution(q).count == count_oracle(q).count);
                    auto q1 = query({a0, 1}, {u0, 1}, {1}, 1, p, k);
                    CHECK(count_convolution(q1).count == count_oracle(q1).count);
                }
}

TEST_CASE("count_auto falls back to the oracle above the convolution ceiling") {
    // p^k = 3^10 exceeds the convolution ceiling but p^(k*l) fits the oracle's.
    auto q = query({1}, {1}, {}, 10, 3, 10);
    const CountResult res = count_auto(q);
    CHECK(res.method == CountMethod::ORACLE);
    CHECK(res.count == 1);
    CHECK(count_auto(query({1, 1, 1}, {1, 0, 0}, {}, 0, 3, 1)).method == CountMethod::CONVOLUTION);
}

TEST_CASE("valid_pivots") {
    CHECK(valid_pivots(DiagonalForm({Int(1), Int(3), Int(2)}), {Int(1), Int(1), Int(3)}, Int(3)) ==
          std::vector<std::size_t>{0});
    CHECK(valid_pivots(DiagonalForm({Int(1), Int(1)}), {Int(3), Int(3)}, Int(3)).empty());
    CHECK_THROWS_AS(valid_pivots(DiagonalForm({Int(1)}), {Int(1), Int(1)}, Int(3)), InvalidInput);
}

TEST_CASE("cp_coefficient frozen branch values and range") {
    CHECK(cp_coefficient(Int(1), Int(3), 3, 0) == Rat(2));
    CHECK(cp_coefficient(Int(3), Int(3), 3, 0) == Rat(-1));
    CHECK(cp_coefficient(Int(3), Int(3), 3, 1) == Rat(-1));
    CHECK(cp_coefficient(Int(1), Int(5), 2, 1) == Rat(0));
    CHECK(cp_coefficient(Int(15), Int(5), 4, 0) == Rat(1));
    CHECK(cp_coefficient(Int(15), Int(5), 4, 1) == Rat(-1));
    CHECK_THROWS_AS(cp_coefficient(Int(1), Int(3), 3, 2), UndefinedBranch);
    for (long p : {3L, 5L, 7L})
        for (long m = 1; m <= 2 * p; ++m)
            for (unsigned long t = 1; t <= 4; ++t)
                for (unsigned long rp = 0; rp <= 1; ++rp) {
                    const Rat c = cp_coefficient(Int(m), Int(p), t, rp);
                    CHECK(c >= Rat(-1));
                    CHECK(c <= Rat(Int(p + 1), Int(p - 1)));
                }
}

TEST_CASE("closed_form_pivot_count matches frozen values and the oracle") {
    CHECK(closed_form_pivot_count(query({1, 1, 1}, {1, 0, 0}, {0}, 0, 3, 1), 0).count == 2);
    CHECK(closed_form_pivot_count(query({1, 1}, {1, 0}, {0}, 0, 5, 1), 0).count ==
          count_oracle(query({1, 1}, {1, 0}, {0}, 0, 5, 1)).count);
    // Nonresidue coefficients exercise the character factor.
    CHECK(closed_form_pivot_count(query({2, 1, 1}, {1, 1, 1}, {1}, 0, 3, 1), 1).count == 10);
    CHECK(closed_form_pivot_count(query({2, 1, 1}, {1, 1, 1}, {0}, 0, 3, 1), 0).count == 8);
    SUBCASE("k = 2 scaling") {
        auto q = query({1, 1, 1}, {1, 0, 0}, {0}, 0, 3, 2);
        CHECK(closed_form_pivot_count(q, 0).count == 18);
        CHECK(closed_form_pivot_count(q, 0).count == count_oracle(q).count);
    }
    SUBCASE("error branches") {
        CHECK_THROWS_AS(closed_form_pivot_count(query({1, 1, 1}, {1, 0, 0}, {1}, 0, 3, 1), 1), NoPivot);
        CHECK_THROWS_AS(closed_form_pivot_count(query({3, 1, 1}, {0, 1, 0}, {0}, 0, 3, 1), 0), NoPivot);
        // p | m with p dividing some coefficient: hypothesis violated.
        CHECK_THROWS_AS(closed_form_pivot_count(query({1, 1, 1, 3}, {1, 1, 1, 0}, {0}, 0, 3, 1), 0),
                        HypothesisViolated);
        CHECK_THROWS_AS(closed_form_pivot_count(query({1, 1, 1}, {1, 0, 0}, {0, 1}, 0, 3, 1), 0), InvalidInput);
        CHECK_THROWS_AS(closed_form_pivot_count(query({1, 1, 1}, {1, 0, 0}, {0}, 1, 3, 1), 0), InvalidInput);
    }
}

TEST_CASE("lower_bound_unit frozen values and soundness at the tight cell") {
    CHECK(lower_bound_unit(3, Int(3), 1, false, 3) == Rat(2));
    CHECK(lower_bound_unit(3, Int(5), 1, false, 3) == Rat(10));
    CHECK(lower_bound_unit(4, Int(3), 1, true, 4) == Rat(12));
    CHECK_THROWS_AS(lower_bound_unit(3, Int(3), 1, true, 2), HypothesisViolated);
    CHECK_THROWS_AS(lower_bound_unit(3, Int(2), 1, false, 3), InvalidPrime);
    // The tight cell: bound 2 equals the exact pivot count 2.
    CHECK(lower_bound_unit(3, Int(3), 1, false, 3) ==
          Rat(closed_form_pivot_count(query({1, 1, 1}, {1, 0, 0}, {0}, 0, 3, 1), 0).count));
}

TEST_CASE("lower_bound_shifted frozen values") {
    CHECK(lower_bound_shifted(3, 1, 1, Int(3), 2) == Rat(9));
    CHECK(lower_bound_shifted(3, 1, 1, Int(3), 1) == Rat(1));
    CHECK(lower_bound_shifted(5, 2, 1, Int(5), 3) == Rat(625));
    CHECK_THROWS_AS(lower_bound_shifted(3, 2, 1, Int(3), 1), HypothesisViolated);
}

TEST_CASE("count is non-increasing in r and the lifting identity holds") {
    auto count = [&](unsigned long r, unsigned long k) {
        return count_oracle(query({1, 3, 1}, {1, 1, 1}, {}, r, 3, k)).count;
    };
    CHECK(count(0, 2) >= count(1, 2));
    CHECK(count(1, 2) >= count(2, 2));
    // depth of u=(1,1,1) in diag(1,3,1) at p=3 is 1; lifting holds for k > 1.
    auto lift = [&](unsigned long r, unsigned long k) {
        return count_oracle(query({1, 3, 1}, {1, 1, 1}, {0, 2}, r, 3, k)).count;
    };
    CHECK(lift(0, 3) == ipow(Int(3), 2) * lift(0, 2));
    CHECK(lift(1, 3) == ipow(Int(3), 2) * lift(1, 2));
}
