#pragma once

#include "mpir/ratemath.hpp"

#include <vector>

namespace mpir::testing {

/// Rows P_i = C(K-D, i) M^(K-D-i) P_{K-D} rebuilt from the table's own last row.
inline std::vector<std::vector<Rational>> rows_from_last(const ratemath::ProbabilityTable& t)
{
    const unsigned top = t.params.K - t.params.D;
    std::vector<std::vector<Rational>> rows(top + 1);
    rows[top] = t.row(top);
    std::vector<Rational> acc = rows[top];
    for (unsigned i = top; i-- > 0;) {
        acc = t.mixing.entries * acc;
        rows[i] = acc;
        for (auto& x : rows[i]) {
            x *= Rational(binomial(top, i));
        }
    }
    return rows;
}

/// Tables that move a fraction of one cell's mass to another cell and no
/// longer follow the recursion from their own last row. Deterministic order.
inline std::vector<ratemath::ProbabilityTable> table_mutations(const ratemath::ProbabilityTable& t,
                                                               std::size_t limit)
{
    std::vector<ratemath::ProbabilityTable> out;
    const unsigned rows = t.row_count(), cols = t.col_count();
    const Rational shares[] = {Rational(1, 2), Rational(1, 4), Rational(1, 3)};
    for (const auto& share : shares)
        for (unsigned a = 0; a < rows * cols; ++a)
            for (unsigned b = 0; b < rows * cols; ++b) {
                if (out.size() >= limit) {
                    return out;
                }
                const unsigned ai = a / cols, aj = a % cols + 1, bi = b / cols, bj = b % cols + 1;
                if (a == b || t.p(ai, aj) == 0) {
                    continue;
                }
                auto m = t;
                const Rational moved = t.p(ai, aj) * share;
                m.p(ai, aj) -= moved;
                m.p(bi, bj) += moved;
                bool follows = true;
                const auto rebuilt = rows_from_last(m);
                for (unsigned i = 0; i < rows && follows; ++i) {
                    follows = rebuilt[i] == m.row(i);
                }
                if (!follows) {
                    out.push_back(std::move(m));
                }
            }
    return out;
}

} // namespace mpir::testing
