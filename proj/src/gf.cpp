#include "mpir/gf.hpp"

#include "mpir/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace mpir::gf {

namespace {

void require_same_field(std::uint32_t a, std::uint32_t b)
{
    if (a != b) {
        throw ParameterError("field order mismatch: " + std::to_string(a) + " vs " +
                             std::to_string(b));
    }
}

} // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

void require_field_order(std::uint32_t q)
{
    if (q < 3 || !is_prime(q)) {
        throw ParameterError("field order q=" + std::to_string(q) + " must be a prime >= 3");
    }
}

PrimeField::PrimeField(std::uint32_t q) : q_(q)
{
    require_field_order(q);
}

Symbol PrimeField::inv(Symbol a) const
{
    if (a % q_ == 0) {
        throw DivisionByZero("inverse of zero in F_" + std::to_string(q_));
    }
    // extended Euclid on (a, q)
    std::int64_t r0 = q_, r1 = a % q_;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t t = r0 / r1;
        r0 = std::exchange(r1, r0 - t * r1);
        s0 = std::exchange(s1, s0 - t * s1);
    }
    std::int64_t r = s0 % static_cast<std::int64_t>(q_);
    return static_cast<Symbol>(r < 0 ? r + q_ : r);
}

FieldElement::FieldElement(std::uint64_t value, std::uint32_t q)
    : value_(0), q_(q)
{
    require_field_order(q);
    value_ = static_cast<Symbol>(value % q);
}

FieldElement fe_arith(FieldElement a, FieldElement b, ArithOp op)
{
    require_same_field(a.order(), b.order());
    const std::uint64_t q = a.order();
    switch (op) {
    case ArithOp::add:
        return {(std::uint64_t{a.value()} + b.value()) % q, a.order()};
    case ArithOp::sub:
        return {(std::uint64_t{a.value()} + q - b.value()) % q, a.order()};
    case ArithOp::mul:
        return {std::uint64_t{a.value()} * b.value() % q, a.order()};
    }
    throw ParameterError("unknown arithmetic op");
}

FieldElement fe_inv(FieldElement a)
{
    return {PrimeField(a.order()).inv(a.value()), a.order()};
}

FieldElement operator+(FieldElement a, FieldElement b) { return fe_arith(a, b, ArithOp::add); }
FieldElement operator-(FieldElement a, FieldElement b) { return fe_arith(a, b, ArithOp::sub); }
FieldElement operator*(FieldElement a, FieldElement b) { return fe_arith(a, b, ArithOp::mul); }

// ---------------------------------------------------------------------------

FieldVector::FieldVector(std::size_t length, std::uint32_t q) : q_(q), values_(length, 0)
{
    require_field_order(q);
}

FieldVector::FieldVector(std::vector<Symbol> values, std::uint32_t q)
    : q_(q), values_(std::move(values))
{
    require_field_order(q);
    for (Symbol v : values_) {
        if (v >= q_) {
            throw ParameterError("symbol " + std::to_string(v) + " out of range for q=" +
                                 std::to_string(q_));
        }
    }
}

FieldElement FieldVector::at(std::size_t i) const
{
    return {values_.at(i), q_};
}

void FieldVector::set(std::size_t i, std::uint64_t value)
{
    values_.at(i) = static_cast<Symbol>(value % q_);
}

bool FieldVector::is_zero() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](Symbol v) { return v == 0; });
}

std::size_t FieldVector::nonzero_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](Symbol v) { return v != 0; }));
}

void FieldVector::add_scaled(Symbol c, const FieldVector& other)
{
    require_same_field(q_, other.q_);
    if (other.size() != size()) {
        throw ParameterError("vector length mismatch");
    }
    if (c == 0) {
        return;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] = static_cast<Symbol>((values_[i] + std::uint64_t{c} * other.values_[i]) % q_);
    }
}

// ---------------------------------------------------------------------------

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t q)
    : q_(q), rows_(rows), cols_(cols), entries_(rows * cols, 0)
{
    require_field_order(q);
    if (rows == 0 || cols == 0) {
        throw ParameterError("matrix dimensions must be positive");
    }
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Symbol> entries,
                         std::uint32_t q)
    : q_(q), rows_(rows), cols_(cols), entries_(std::move(entries))
{
    require_field_order(q);
    if (rows == 0 || cols == 0 || entries_.size() != rows * cols) {
        throw ParameterError("matrix entries do not match " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
    for (Symbol v : entries_) {
        if (v >= q_) {
            throw ParameterError("matrix entry out of range");
        }
    }
}

FieldMatrix FieldMatrix::identity(std::size_t n, std::uint32_t q)
{
    FieldMatrix m(n, n, q);
    for (std::size_t i = 0; i < n; ++i) {
        m.entries_[i * n + i] = 1;
    }
    return m;
}

void FieldMatrix::set(std::size_t r, std::size_t c, std::uint64_t value)
{
    if (r >= rows_ || c >= cols_) {
        throw ParameterError("matrix index out of range");
    }
    entries_[r * cols_ + c] = static_cast<Symbol>(value % q_);
}

std::size_t FieldMatrix::row_nonzero_count(std::size_t r) const noexcept
{
    std::size_t n = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
        n += (*this)(r, c) != 0;
    }
    return n;
}

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b)
{
    require_same_field(a.order(), b.order());
    if (a.cols() != b.rows()) {
        throw ParameterError("matrix product dimension mismatch");
    }
    const PrimeField f(a.order());
    FieldMatrix out(a.rows(), b.cols(), a.order());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Symbol acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc = f.add(acc, f.mul(a(i, k), b(k, j)));
            }
            out.set(i, j, acc);
        }
    }
    return out;
}

std::optional<FieldMatrix> mat_invert(const FieldMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw ParameterError("cannot invert a non-square " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix");
    }
    const std::size_t n = m.rows();
    const PrimeField f(m.order());

    // augmented [m | I], row-major, width 2n
    std::vector<Symbol> a(n * 2 * n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            a[r * 2 * n + c] = m(r, c);
        }
        a[r * 2 * n + n + r] = 1;
    }
    auto row = [&](std::size_t r) { return std::span<Symbol>(a).subspan(r * 2 * n, 2 * n); };

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && row(pivot)[col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return std::nullopt;
        }
        if (pivot != col) {
            std::swap_ranges(row(pivot).begin(), row(pivot).end(), row(col).begin());
        }
        auto prow = row(col);
        const Symbol scale = f.inv(prow[col]);
        for (auto& x : prow) {
            x = f.mul(x, scale);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            auto target = row(r);
            const Symbol factor = target[col];
            if (factor == 0) {
                continue;
            }
            for (std::size_t c = 0; c < 2 * n; ++c) {
                target[c] = f.sub(target[c], f.mul(factor, prow[c]));
            }
        }
    }

    FieldMatrix inv(n, n, m.order());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            inv.set(r, c, a[r * 2 * n + n + c]);
        }
    }
    return inv;
}

std::string to_string(const FieldVector& v)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? "," : "") << v[i];
    }
    os << ']';
    return os.str();
}

std::string to_string(const FieldMatrix& m)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r ? ",[" : "[");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            os << (c ? "," : "") << m(r, c);
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

} // namespace mpir::gf
