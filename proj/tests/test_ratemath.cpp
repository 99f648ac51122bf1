#include "mpir/errors.hpp"
#include "mpir/ratemath.hpp"

#include <doctest.h>

using namespace mpir;
using namespace mpir::ratemath;

namespace {

using Vec = std::vector<Rational>;

// Oracle: builds M from the definition and pushes 1^T through it one factor at a time.
Vec oracle_row_times(const Vec& x, unsigned D, unsigned L, bool plus_identity)
{
    Vec beta(D);
    for (unsigned j = 1; j <= D; ++j) {
        beta[j - 1] = Rational(D * L) / Rational(binomial(D, j));
        beta[j - 1].canonicalize();
    }
    Vec y(D, 0);
    for (unsigned c = 0; c < D; ++c) {
        // column c of M: 1/beta_1 in row 0, beta_{c+1}/beta_{c+2} in row c+1
        y[c] += x[0] / beta[0];
        if (c + 1 < D) {
            y[c] += x[c + 1] * beta[c] / beta[c + 1];
        }
        if (plus_identity) {
            y[c] += x[c];
        }
    }
    return y;
}

std::pair<Vec, Vec> oracle_f_g(unsigned K, unsigned D, unsigned L)
{
    Vec f(D, 1), g(D, 1);
    for (unsigned t = 0; t < K - D; ++t) {
        f = oracle_row_times(f, D, L, false);
        g = oracle_row_times(g, D, L, true);
    }
    return {f, g};
}

} // namespace

TEST_CASE("mixing matrix examples")
{
    auto mm = build_mixing_matrix(SchemeParams::make(4, 2, 2));
    CHECK(mm.betas == Vec{2, 4});
    CHECK(mm.entries(0, 0) == Rational(1, 2));
    CHECK(mm.entries(0, 1) == Rational(1, 2));
    CHECK(mm.entries(1, 0) == Rational(1, 2));
    CHECK(mm.entries(1, 1) == 0);

    mm = build_mixing_matrix(SchemeParams::make(3, 1, 3));
    CHECK(mm.entries(0, 0) == Rational(1, 3));

    mm = build_mixing_matrix(SchemeParams::make(3, 2, 1));
    CHECK(mm.betas == Vec{1, 2});
    CHECK(mm.entries(0, 0) == 1);
    CHECK(mm.entries(0, 1) == 1);
    CHECK(mm.entries(1, 0) == Rational(1, 2));
    CHECK(mm.entries(1, 1) == 0);
}

TEST_CASE("f and g examples")
{
    auto t = compute_ptable(SchemeParams::make(4, 2, 2));
    CHECK(t.f == Vec{Rational(3, 4), Rational(1, 2)});
    CHECK(t.g == Vec{Rational(15, 4), Rational(5, 2)});

    t = compute_ptable(SchemeParams::make(3, 2, 1));
    CHECK(t.f == Vec{Rational(3, 2), 1});
    CHECK(t.g == Vec{Rational(5, 2), 2});

    t = compute_ptable(SchemeParams::make(3, 3, 2));
    CHECK(t.f == Vec{1, 1, 1});
    CHECK(t.g == Vec{1, 1, 1});
}

TEST_CASE("f and g match the independent oracle on the grid")
{
    for (unsigned K = 1; K <= 8; ++K)
        for (unsigned D = 1; D <= K; ++D)
            for (unsigned L = 1; L <= 3; ++L) {
                CAPTURE(K);
                CAPTURE(D);
                CAPTURE(L);
                const auto p = SchemeParams::make(K, D, L);
                const auto fg = compute_f_g(p, build_mixing_matrix(p));
                const auto [f, g] = oracle_f_g(K, D, L);
                CHECK(fg.f == f);
                CHECK(fg.g == g);
            }
}

TEST_CASE("j* selection")
{
    const Vec f1{Rational(3, 4), Rational(1, 2)}, g1{Rational(15, 4), Rational(5, 2)};
    CHECK(select_jstar(f1, g1) == 1);
    const Vec f2{1, 2}, g2{2, 2};
    CHECK(select_jstar(f2, g2) == 2);
    const Vec one{1};
    CHECK(select_jstar(one, one) == 1);
}

TEST_CASE("probability table examples")
{
    auto t = compute_ptable(SchemeParams::make(4, 2, 2));
    CHECK(t.p(0, 1) == Rational(2, 15));
    CHECK(t.p(0, 2) == Rational(1, 15));
    CHECK(t.p(1, 1) == Rational(4, 15));
    CHECK(t.p(1, 2) == Rational(4, 15));
    CHECK(t.p(2, 1) == Rational(4, 15));
    CHECK(t.p(2, 2) == 0);
    CHECK(t.total() == 1);
    CHECK(t.jstar == 1);

    t = compute_ptable(SchemeParams::make(3, 3, 1));
    REQUIRE(t.row_count() == 1);
    CHECK(t.p(0, t.jstar) == 1);
    CHECK(t.total() == 1);

    t = compute_ptable(SchemeParams::make(3, 2, 1));
    CHECK(t.p(1, 1) == Rational(2, 5));
    CHECK(t.p(1, 2) == 0);
    CHECK(t.p(0, 1) == Rational(2, 5));
    CHECK(t.p(0, 2) == Rational(1, 5));
}

TEST_CASE("rates and capacity examples")
{
    CHECK(achievable_rate(SchemeParams::make(4, 2, 2)) == Rational(5, 6));
    CHECK(achievable_rate(SchemeParams::make(3, 3, 2)) == 1);
    CHECK(achievable_rate(SchemeParams::make(3, 2, 1)) == Rational(5, 6));
    CHECK(achievable_rate(SchemeParams::make(5, 2, 2)) == Rational(22, 27));
    CHECK(achievable_rate(SchemeParams::make(7, 3, 2)) == Rational(519, 599));
    CHECK(achievable_rate(SchemeParams::make(5, 4, 1)) == Rational(14, 15));
    CHECK(expected_download_units(compute_ptable(SchemeParams::make(4, 2, 2))) == Rational(12, 5));

    CHECK(capacity_upper_bound(4, 2, 5) == Rational(5, 6));
    CHECK(capacity_upper_bound(3, 3, 7) == 1);
    CHECK(capacity_upper_bound(5, 2, 5) == Rational(50, 61));
    CHECK(capacity_divisible(4, 2, 5) == Rational(5, 6));
    CHECK(capacity_divisible(4, 4, 9) == 1);
    CHECK(capacity_divisible(6, 2, 5) == Rational(25, 31));
    CHECK_THROWS_AS(capacity_divisible(5, 2, 5), ParameterError);
}

TEST_CASE("distribution verification")
{
    auto t = compute_ptable(SchemeParams::make(4, 2, 2));
    CHECK(verify_distribution(t));
    CHECK(check_privacy_conditions(t));
    t.p(2, 2) = Rational(1, 15);
    CHECK_FALSE(verify_distribution(t));

    CHECK(verify_distribution(compute_ptable(SchemeParams::make(7, 3, 2))));

    t = compute_ptable(SchemeParams::make(4, 2, 2));
    t.p(1, 1) = Rational(5, 15);
    t.p(1, 2) = Rational(3, 15);
    CHECK(t.total() == 1);
    CHECK_FALSE(check_privacy_conditions(t));
}

TEST_CASE("divisible identity")
{
    CHECK(verify_divisible_identity(SchemeParams::make(4, 2, 2)));
    CHECK(verify_divisible_identity(SchemeParams::make(3, 3, 1)));
    CHECK(verify_divisible_identity(SchemeParams::make(6, 3, 1)));
    CHECK(compute_ptable(SchemeParams::make(6, 3, 1)).row_sum(0) == Rational(1, 4));
    CHECK_THROWS_AS(verify_divisible_identity(SchemeParams::make(5, 2, 1)), ParameterError);
}

TEST_CASE("LP optimality")
{
    auto rep = lp_optimality_check(SchemeParams::make(4, 2, 2), 200, 1);
    CHECK(rep.ok);
    CHECK(rep.optimum == Rational(1, 5));
    CHECK(rep.argmax == 1);
    CHECK(lp_optimality_check(SchemeParams::make(3, 1, 2), 50, 1).ok);
    CHECK(lp_optimality_check(SchemeParams::make(5, 3, 1), 200, 1).ok);
}

TEST_CASE("grid invariants")
{
    for (unsigned K = 1; K <= 8; ++K)
        for (unsigned D = 1; D <= K; ++D)
            for (unsigned L = 1; L <= 3; ++L) {
                CAPTURE(K);
                CAPTURE(D);
                CAPTURE(L);
                const auto p = SchemeParams::make(K, D, L);
                const auto t = compute_ptable(p);
                CHECK(verify_distribution(t));
                CHECK(check_privacy_conditions(t));
                const Rational R = achievable_rate(p);
                CHECK(R == rate_from_table(t));
                CHECK(R <= capacity_upper_bound(K, D, p.N));
                CHECK(R > 0);
                // only the last row's j* column is nonzero there
                for (unsigned j = 1; j <= D; ++j) {
                    CHECK((t.p(K - D, j) == 0) == (j != t.jstar));
                }
                if (K % D == 0) {
                    CHECK(R == capacity_divisible(K, D, p.N));
                    CHECK(verify_divisible_identity(p));
                }
            }
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(SchemeParams::make(2, 3, 1), ParameterError);
    CHECK_THROWS_AS(SchemeParams::make(2, 0, 1), ParameterError);
    CHECK_THROWS_AS(SchemeParams::make(2, 1, 0), ParameterError);
    CHECK_THROWS_AS(SchemeParams::make(2, 1, 2, 4), ParameterError);
    CHECK_THROWS_AS(SchemeParams::make(2, 1, 2, 3, 3), ParameterError);
    CHECK(SchemeParams::make(4, 2, 2).N == 5);
    CHECK(SchemeParams::make(4, 2, 2).m == 2);
}
