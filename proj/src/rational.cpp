#include "mpir/rational.hpp"

#include "mpir/errors.hpp"

#include <cstdio>

namespace mpir {

Integer binomial(unsigned n, unsigned k)
{
    if (k > n) {
        return 0;
    }
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

Rational fraction(const Integer& num, const Integer& den)
{
    if (den == 0) {
        throw ParameterError("zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_fraction_string(const Rational& r)
{
    return r.get_str();
}

std::string to_decimal_string(const Rational& r, int significant)
{
    mpf_class f(r, 256);
    char buf[64];
    gmp_snprintf(buf, sizeof buf, "%.*Fg", significant, f.get_mpf_t());
    return buf;
}

Rational parse_fraction(const std::string& s)
{
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0) {
        throw ParameterError("not a fraction: '" + s + "'");
    }
    r.canonicalize();
    return r;
}

Rational power(const Rational& base, unsigned exponent)
{
    Rational out = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        out *= base;
    }
    return out;
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.size() != b.size()) {
        throw ParameterError("rational matrix size mismatch");
    }
    const std::size_t n = a.size();
    RationalMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (sgn(a(i, k)) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a(i, k) * b(k, j);
            }
        }
    }
    return out;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.size() != b.size()) {
        throw ParameterError("rational matrix size mismatch");
    }
    RationalMatrix out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out(i, j) = a(i, j) + b(i, j);
        }
    }
    return out;
}

std::vector<Rational> operator*(const RationalMatrix& a, const std::vector<Rational>& x)
{
    if (a.size() != x.size()) {
        throw ParameterError("rational matrix/vector size mismatch");
    }
    std::vector<Rational> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[i] += a(i, j) * x[j];
        }
    }
    return out;
}

RationalMatrix power(const RationalMatrix& m, unsigned exponent)
{
    RationalMatrix out = RationalMatrix::identity(m.size());
    for (unsigned i = 0; i < exponent; ++i) {
        out = out * m;
    }
    return out;
}

std::vector<Rational> column_sums(const RationalMatrix& a)
{
    std::vector<Rational> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[j] += a(i, j);
        }
    }
    return out;
}

} // namespace mpir
