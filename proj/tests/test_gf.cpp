#include "mpir/errors.hpp"
#include "mpir/gf.hpp"

#include <doctest.h>

using namespace mpir;
using namespace mpir::gf;

TEST_CASE("primality and field order")
{
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(65521));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(9));
    CHECK_THROWS_AS(require_field_order(2), ParameterError);
    CHECK_THROWS_AS(require_field_order(4), ParameterError);
    CHECK_NOTHROW(require_field_order(7));
}

TEST_CASE("scalar arithmetic examples")
{
    CHECK(PrimeField(5).add(3, 4) == 2);
    CHECK(PrimeField(5).mul(3, 4) == 2);
    CHECK(PrimeField(3).sub(0, 1) == 2);
    CHECK(PrimeField(5).inv(2) == 3);
    CHECK(PrimeField(7).inv(3) == 5);
    CHECK(PrimeField(3).inv(2) == 2);
    CHECK_THROWS_AS(PrimeField(7).inv(0), DivisionByZero);
    CHECK_THROWS_AS(fe_inv(FieldElement(0, 5)), DivisionByZero);
    CHECK_THROWS_AS(FieldElement(1, 5) + FieldElement(1, 7), ParameterError);
    CHECK((FieldElement(3, 5) * FieldElement(4, 5)).value() == 2);
    CHECK(FieldElement(12, 5).value() == 2);
}

TEST_CASE("field axioms hold exhaustively for small q")
{
    for (std::uint32_t q : {3u, 5u, 7u}) {
        const PrimeField F(q);
        for (Symbol a = 0; a < q; ++a) {
            CHECK(F.add(a, 0) == a);
            CHECK(F.mul(a, 1) == a);
            CHECK(F.add(a, F.neg(a)) == 0);
            if (a != 0) {
                CHECK(F.mul(a, F.inv(a)) == 1);
            }
            for (Symbol b = 0; b < q; ++b) {
                CHECK(F.add(a, b) == (a + b) % q);
                CHECK(F.mul(a, b) == (a * b) % q);
                CHECK(F.sub(a, b) == (a + q - b) % q);
                CHECK(F.add(F.sub(a, b), b) == a);
                for (Symbol c = 0; c < q; ++c) {
                    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                }
            }
        }
    }
}

TEST_CASE("matrix inversion examples")
{
    auto inv = mat_invert(FieldMatrix(2, 2, {1, 0, 0, 2}, 3));
    REQUIRE(inv);
    CHECK(*inv == FieldMatrix(2, 2, {1, 0, 0, 2}, 3));

    CHECK_FALSE(mat_invert(FieldMatrix(2, 2, {1, 1, 2, 2}, 3)));

    inv = mat_invert(FieldMatrix(2, 2, {1, 2, 3, 4}, 5));
    REQUIRE(inv);
    CHECK(*inv == FieldMatrix(2, 2, {3, 1, 4, 2}, 5));

    CHECK_THROWS_AS(mat_invert(FieldMatrix(2, 3, 5)), ParameterError);
    CHECK_THROWS_AS(FieldMatrix(2, 2, {0, 0, 0, 5}, 5), ParameterError);
    CHECK_THROWS_AS(FieldVector({0, 3}, 3), ParameterError);
}

TEST_CASE("every 2x2 matrix over F_3: inverse exists iff det != 0 and is correct")
{
    const std::uint32_t q = 3;
    const auto I = FieldMatrix::identity(2, q);
    int invertible = 0;
    for (Symbol a = 0; a < q; ++a)
        for (Symbol b = 0; b < q; ++b)
            for (Symbol c = 0; c < q; ++c)
                for (Symbol d = 0; d < q; ++d) {
                    const FieldMatrix m(2, 2, {a, b, c, d}, q);
                    const bool det_nonzero = (a * d + q * q - b * c) % q != 0;
                    const auto inv = mat_invert(m);
                    CHECK(inv.has_value() == det_nonzero);
                    if (inv) {
                        ++invertible;
                        CHECK(m * *inv == I);
                        CHECK(*inv * m == I);
                    }
                }
    // |GL_2(F_3)| = (9-1)(9-3)
    CHECK(invertible == 48);
}

TEST_CASE("vector helpers")
{
    FieldVector v({1, 0, 4}, 5);
    CHECK(v.nonzero_count() == 2);
    CHECK_FALSE(v.is_zero());
    v.add_scaled(1, FieldVector({4, 0, 1}, 5));
    CHECK(v.is_zero());
    CHECK(to_string(FieldVector({1, 2}, 3)) == "[1,2]");
}
