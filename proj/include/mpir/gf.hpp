#pragma once

// Arithmetic over a prime field F_q and the small vector/matrix algebra the
// protocol needs (query coefficients, demand matrices, decoding).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mpir::gf {

using Symbol = std::uint32_t;

bool is_prime(std::uint64_t n);

/// Throws ParameterError unless q is a prime >= 3.
void require_field_order(std::uint32_t q);

/// Unchecked arithmetic on reduced residues; the hot paths go through this.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t q);

    std::uint32_t order() const noexcept { return q_; }

    Symbol add(Symbol a, Symbol b) const noexcept
    {
        std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<Symbol>(s >= q_ ? s - q_ : s);
    }
    Symbol sub(Symbol a, Symbol b) const noexcept { return a >= b ? a - b : a + (q_ - b); }
    Symbol neg(Symbol a) const noexcept { return a == 0 ? 0 : q_ - a; }
    Symbol mul(Symbol a, Symbol b) const noexcept
    {
        return static_cast<Symbol>((std::uint64_t{a} * b) % q_);
    }
    /// Throws DivisionByZero for a == 0.
    Symbol inv(Symbol a) const;

private:
    std::uint32_t q_;
};

class FieldElement {
public:
    /// Value is reduced mod q.
    FieldElement(std::uint64_t value, std::uint32_t q);

    Symbol value() const noexcept { return value_; }
    std::uint32_t order() const noexcept { return q_; }

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    Symbol value_;
    std::uint32_t q_;
};

enum class ArithOp { add, sub, mul };

/// Throws ParameterError when a and b live in different fields.
FieldElement fe_arith(FieldElement a, FieldElement b, ArithOp op);
FieldElement fe_inv(FieldElement a);

FieldElement operator+(FieldElement a, FieldElement b);
FieldElement operator-(FieldElement a, FieldElement b);
FieldElement operator*(FieldElement a, FieldElement b);

class FieldVector {
public:
    FieldVector(std::size_t length, std::uint32_t q);
    /// Throws ParameterError if any value is >= q.
    FieldVector(std::vector<Symbol> values, std::uint32_t q);

    std::uint32_t order() const noexcept { return q_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    Symbol operator[](std::size_t i) const noexcept { return values_[i]; }
    FieldElement at(std::size_t i) const;
    /// Value is reduced mod q.
    void set(std::size_t i, std::uint64_t value);

    std::span<const Symbol> values() const noexcept { return values_; }

    bool is_zero() const noexcept;
    std::size_t nonzero_count() const noexcept;

    /// this += c * other
    void add_scaled(Symbol c, const FieldVector& other);

    friend bool operator==(const FieldVector&, const FieldVector&) = default;

private:
    std::uint32_t q_;
    std::vector<Symbol> values_;
};

class FieldMatrix {
public:
    FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t q);
    /// Row-major entries; throws ParameterError on size mismatch or out-of-range values.
    FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Symbol> entries, std::uint32_t q);

    static FieldMatrix identity(std::size_t n, std::uint32_t q);

    std::uint32_t order() const noexcept { return q_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Symbol operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint64_t value);

    std::span<const Symbol> entries() const noexcept { return entries_; }
    std::size_t row_nonzero_count(std::size_t r) const noexcept;

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    std::uint32_t q_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Symbol> entries_;
};

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b);

/// Gauss-Jordan elimination with first-nonzero pivoting. Returns std::nullopt
/// when the matrix is singular; throws ParameterError when it is not square.
std::optional<FieldMatrix> mat_invert(const FieldMatrix& m);

std::string to_string(const FieldVector& v);
std::string to_string(const FieldMatrix& m);

} // namespace mpir::gf
