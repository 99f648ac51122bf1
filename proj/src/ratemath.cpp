#include "mpir/ratemath.hpp"

#include "mpir/errors.hpp"

#include <numeric>

namespace mpir::ratemath {

namespace {

std::string cell(unsigned i, unsigned j)
{
    return "P(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

} // namespace

MixingMatrix build_mixing_matrix(const SchemeParams& params)
{
    params.validate();
    const unsigned D = params.D;
    MixingMatrix mix;
    mix.D = D;
    mix.entries = RationalMatrix(D);
    for (unsigned j = 1; j <= D; ++j) {
        mix.betas.push_back(fraction(D * params.L, binomial(D, j)));
    }
    for (unsigned c = 0; c < D; ++c) {
        mix.entries(0, c) = 1 / mix.betas[0];
    }
    for (unsigned j = 1; j < D; ++j) {
        mix.entries(j, j - 1) = mix.betas[j - 1] / mix.betas[j];
    }
    return mix;
}

FG compute_f_g(const SchemeParams& params, const MixingMatrix& mixing)
{
    const unsigned e = params.K - params.D;
    const RationalMatrix shifted = RationalMatrix::identity(mixing.D) + mixing.entries;
    return {column_sums(power(mixing.entries, e)), column_sums(power(shifted, e))};
}

unsigned select_jstar(std::span<const Rational> f, std::span<const Rational> g)
{
    if (f.empty() || f.size() != g.size()) {
        throw ParameterError("f and g must be non-empty and of equal length");
    }
    if (sgn(g[0]) <= 0) {
        throw ParameterError("g entries must be positive");
    }
    unsigned best = 0;
    Rational best_ratio = f[0] / g[0];
    for (unsigned j = 1; j < f.size(); ++j) {
        if (sgn(g[j]) <= 0) {
            throw ParameterError("g entries must be positive");
        }
        Rational ratio = f[j] / g[j];
        if (ratio > best_ratio) {
            best = j;
            best_ratio = ratio;
        }
    }
    return best + 1;
}

Rational ProbabilityTable::row_sum(unsigned i) const
{
    return std::accumulate(rows_.at(i).begin(), rows_.at(i).end(), Rational(0));
}

Rational ProbabilityTable::total() const
{
    Rational t = 0;
    for (unsigned i = 0; i < row_count(); ++i) {
        t += row_sum(i);
    }
    return t;
}

ProbabilityTable compute_ptable(const SchemeParams& params)
{
    ProbabilityTable t;
    t.params = params;
    t.mixing = build_mixing_matrix(params);
    auto [f, g] = compute_f_g(params, t.mixing);
    t.f = std::move(f);
    t.g = std::move(g);
    t.jstar = select_jstar(t.f, t.g);

    const unsigned top = params.K - params.D;
    for (unsigned i = 0; i <= top; ++i) {
        t.alphas.push_back(fraction(1, binomial(top, i)));
    }

    std::vector<Rational> last(params.D);
    last[t.jstar - 1] = 1 / t.g[t.jstar - 1];

    t.rows_.resize(top + 1);
    t.rows_[top] = last;
    // P_i = C(K-D, i) M^(K-D-i) P_{K-D}, built downward one multiplication at a time
    std::vector<Rational> power_times_last = last;
    for (unsigned i = top; i-- > 0;) {
        power_times_last = t.mixing.entries * power_times_last;
        std::vector<Rational> row = power_times_last;
        const Rational c(binomial(top, i));
        for (auto& x : row) {
            x *= c;
        }
        t.rows_[i] = std::move(row);
    }
    return t;
}

Rational achievable_rate(const SchemeParams& params)
{
    const MixingMatrix mix = build_mixing_matrix(params);
    const FG fg = compute_f_g(params, mix);
    const unsigned js = select_jstar(fg.f, fg.g);
    const Rational best = fg.f[js - 1] / fg.g[js - 1];
    return Rational(params.D * params.L) / (Rational(params.N) - best);
}

Rational rate_from_table(const ProbabilityTable& table)
{
    const auto& p = table.params;
    return Rational(p.D * p.L) / (Rational(p.N) - table.row_sum(0));
}

Rational expected_download_units(const ProbabilityTable& table)
{
    const auto& p = table.params;
    return (Rational(p.N) - table.row_sum(0)) / p.L;
}

Rational capacity_upper_bound(unsigned K, unsigned D, unsigned N)
{
    if (N < 2 || D < 1 || D > K) {
        throw ParameterError("capacity bound needs N >= 2 and 1 <= D <= K");
    }
    const unsigned whole = K / D;
    const Rational inv_n = fraction(1, N);
    const Rational inv_pow = power(inv_n, whole);
    const Rational frac = fraction(K % D, D);
    const Rational bracket = (1 - inv_pow) / (1 - inv_n) + frac * inv_pow;
    return 1 / bracket;
}

Rational capacity_divisible(unsigned K, unsigned D, unsigned N)
{
    if (D < 1 || D > K || K % D != 0) {
        throw ParameterError("capacity formula requires D | K (K=" + std::to_string(K) +
                             ", D=" + std::to_string(D) + ")");
    }
    if (N < 2) {
        throw ParameterError("capacity formula requires N >= 2");
    }
    const Rational inv_n = fraction(1, N);
    return (1 - inv_n) / (1 - power(inv_n, K / D));
}

CheckReport verify_distribution(const ProbabilityTable& table)
{
    CheckReport rep;
    const auto& p = table.params;
    const unsigned top = p.K - p.D;
    if (table.row_count() != top + 1) {
        rep.fail("table has " + std::to_string(table.row_count()) + " rows, expected " +
                 std::to_string(top + 1));
        return rep;
    }
    for (unsigned i = 0; i <= top; ++i) {
        for (unsigned j = 1; j <= p.D; ++j) {
            if (sgn(table.p(i, j)) < 0) {
                rep.fail(cell(i, j) + " = " + to_fraction_string(table.p(i, j)) + " is negative");
            }
        }
    }
    const Rational total = table.total();
    if (total != 1) {
        rep.fail("probabilities sum to " + to_fraction_string(total) + ", not 1");
    }
    Rational gp = 0;
    for (unsigned j = 1; j <= p.D; ++j) {
        gp += table.g[j - 1] * table.p(top, j);
    }
    if (gp != 1) {
        rep.fail("g^T P_{K-D} = " + to_fraction_string(gp) + ", not 1");
    }
    // re-multiply from the last row
    std::vector<Rational> acc = table.row(top);
    for (unsigned i = top; i-- > 0;) {
        acc = table.mixing.entries * acc;
        const Rational c(binomial(top, i));
        for (unsigned j = 1; j <= p.D; ++j) {
            if (table.p(i, j) != c * acc[j - 1]) {
                rep.fail(cell(i, j) + " = " + to_fraction_string(table.p(i, j)) +
                         " breaks the recursion (expected " + to_fraction_string(c * acc[j - 1]) +
                         ")");
            }
        }
    }
    return rep;
}

CheckReport check_privacy_conditions(const ProbabilityTable& table)
{
    CheckReport rep;
    const auto& p = table.params;
    const auto& a = table.alphas;
    const auto& b = table.mixing.betas;
    for (unsigned i = 1; i <= p.K - p.D; ++i) {
        const Rational lhs = a[i] * table.row_sum(i);
        const Rational rhs = a[i - 1] * b[0] * table.p(i - 1, 1);
        if (lhs != rhs) {
            rep.fail("row condition at i=" + std::to_string(i) + ": " + to_fraction_string(lhs) +
                     " != " + to_fraction_string(rhs));
        }
        for (unsigned j = 1; j < p.D; ++j) {
            const Rational l2 = a[i] * b[j - 1] * table.p(i, j);
            const Rational r2 = a[i - 1] * b[j] * table.p(i - 1, j + 1);
            if (l2 != r2) {
                rep.fail("shift condition at (i,j)=(" + std::to_string(i) + "," +
                         std::to_string(j) + "): " + to_fraction_string(l2) +
                         " != " + to_fraction_string(r2));
            }
        }
    }
    return rep;
}

bool verify_divisible_identity(const SchemeParams& params)
{
    if (params.K % params.D != 0) {
        throw ParameterError("identity requires D | K");
    }
    const ProbabilityTable t = compute_ptable(params);
    const unsigned exponent = params.K / params.D - 1;
    // (DL+1)^(1-K/D) = 1 / N^(K/D - 1)
    return t.row_sum(0) == 1 / power(Rational(params.N), exponent);
}

LpReport lp_optimality_check(const SchemeParams& params, std::size_t trials, Seed seed)
{
    if (trials < 1) {
        throw ParameterError("lp check needs at least one trial");
    }
    const ProbabilityTable t = compute_ptable(params);
    const unsigned D = params.D;
    LpReport rep;
    rep.argmax = t.jstar;

    const unsigned top = params.K - params.D;
    Rational chosen_objective = 0;
    Rational chosen_constraint = 0;
    for (unsigned j = 1; j <= D; ++j) {
        chosen_objective += t.f[j - 1] * t.p(top, j);
        chosen_constraint += t.g[j - 1] * t.p(top, j);
        if (sgn(t.p(top, j)) < 0) {
            rep.ok = false;
            rep.findings.push_back("chosen point is infeasible (negative entry)");
        }
    }
    rep.optimum = chosen_objective;
    if (chosen_constraint != 1) {
        rep.ok = false;
        rep.findings.push_back("chosen point violates g^T x = 1");
    }

    for (unsigned j = 1; j <= D; ++j) {
        rep.vertex_objectives.push_back(t.f[j - 1] / t.g[j - 1]);
        if (rep.vertex_objectives.back() > rep.optimum) {
            rep.ok = false;
            rep.findings.push_back("vertex " + std::to_string(j) + " objective " +
                                   to_fraction_string(rep.vertex_objectives.back()) +
                                   " exceeds " + to_fraction_string(rep.optimum));
        }
    }

    Rng rng(seed);
    for (std::size_t k = 0; k < trials; ++k) {
        std::vector<std::uint64_t> w(D);
        std::uint64_t mass = 0;
        while (mass == 0) {
            mass = 0;
            for (auto& x : w) {
                x = rng.uniform(1001);
                mass += x;
            }
        }
        // x = sum_j (w_j / mass) e_j / g_j, so g^T x = 1 and f^T x is the weighted vertex value
        Rational objective = 0;
        for (unsigned j = 0; j < D; ++j) {
            objective += fraction(Integer(static_cast<unsigned long>(w[j])), Integer(static_cast<unsigned long>(mass))) *
                         rep.vertex_objectives[j];
        }
        ++rep.random_points;
        if (objective > rep.optimum) {
            rep.ok = false;
            rep.findings.push_back("random feasible point beats optimum: " +
                                   to_fraction_string(objective));
            break;
        }
    }
    return rep;
}

} // namespace mpir::ratemath
