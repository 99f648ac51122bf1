#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mpir {

using Integer = mpz_class;
/// GMP keeps mpq_class canonical (lowest terms, positive denominator) after
/// every arithmetic operation.
using Rational = mpq_class;

Integer binomial(unsigned n, unsigned k);

/// num/den in lowest terms; throws ParameterError when den == 0.
Rational fraction(const Integer& num, const Integer& den);

/// "p/q", or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

/// Decimal rendering with the given number of significant digits (reports only).
std::string to_decimal_string(const Rational& r, int significant = 6);

/// Parses "p/q" or "p".
Rational parse_fraction(const std::string& s);

Rational power(const Rational& base, unsigned exponent);

/// Dense square matrix of exact rationals.
class RationalMatrix {
public:
    explicit RationalMatrix(std::size_t n = 0) : n_(n), entries_(n * n) {}

    static RationalMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t n_;
    std::vector<Rational> entries_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
std::vector<Rational> operator*(const RationalMatrix& a, const std::vector<Rational>& x);
RationalMatrix power(const RationalMatrix& m, unsigned exponent);

/// 1^T A: column sums.
std::vector<Rational> column_sums(const RationalMatrix& a);

} // namespace mpir
