#pragma once

// Exact-rational rate computations: mixing matrix, the f/g vectors, the
// query-type probability table, achievable rate and the capacity formulas.
// No floating point is used anywhere in this module.

#include "mpir/params.hpp"
#include "mpir/random.hpp"
#include "mpir/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mpir::ratemath {

/// D x D matrix with first row constant 1/beta_1 and subdiagonal
/// beta_j / beta_{j+1}; beta_j = D*L / C(D, j).
struct MixingMatrix {
    unsigned D = 0;
    RationalMatrix entries;
    std::vector<Rational> betas; ///< betas[j-1] = beta_j
};

MixingMatrix build_mixing_matrix(const SchemeParams& params);

struct FG {
    std::vector<Rational> f; ///< f^T = 1^T M^(K-D)
    std::vector<Rational> g; ///< g^T = 1^T (I+M)^(K-D)
};

FG compute_f_g(const SchemeParams& params, const MixingMatrix& mixing);

/// 1-based index of the largest f_j/g_j; ties go to the smallest index.
unsigned select_jstar(std::span<const Rational> f, std::span<const Rational> g);

/// Probabilities P_{i,j} for 0 <= i <= K-D and 1 <= j <= D.
class ProbabilityTable {
public:
    SchemeParams params;
    MixingMatrix mixing;
    std::vector<Rational> f;
    std::vector<Rational> g;
    unsigned jstar = 1;
    std::vector<Rational> alphas; ///< alphas[i] = 1 / C(K-D, i)

    unsigned row_count() const noexcept { return static_cast<unsigned>(rows_.size()); }
    unsigned col_count() const noexcept { return params.D; }

    /// j is 1-based.
    const Rational& p(unsigned i, unsigned j) const { return rows_.at(i).at(j - 1); }
    Rational& p(unsigned i, unsigned j) { return rows_.at(i).at(j - 1); }
    const std::vector<Rational>& row(unsigned i) const { return rows_.at(i); }

    Rational total() const;
    Rational row_sum(unsigned i) const;

private:
    friend ProbabilityTable compute_ptable(const SchemeParams& params);
    std::vector<std::vector<Rational>> rows_;
};

ProbabilityTable compute_ptable(const SchemeParams& params);

/// D*L / (N - max_j f_j/g_j).
Rational achievable_rate(const SchemeParams& params);

/// D*L / (N - sum_j P_{0,j}), read off the table.
Rational rate_from_table(const ProbabilityTable& table);

/// Expected downloaded message units per retrieval: (N - sum_j P_{0,j}) / L.
Rational expected_download_units(const ProbabilityTable& table);

/// Converse bound for N servers; requires N >= 2 and 1 <= D <= K.
Rational capacity_upper_bound(unsigned K, unsigned D, unsigned N);

/// (1 - 1/N) / (1 - 1/N^(K/D)); throws ParameterError unless D divides K.
Rational capacity_divisible(unsigned K, unsigned D, unsigned N);

struct CheckReport {
    bool ok = true;
    std::vector<std::string> findings;

    explicit operator bool() const noexcept { return ok; }
    void fail(std::string what)
    {
        ok = false;
        findings.push_back(std::move(what));
    }
};

/// Non-negativity, unit total, g^T P_{K-D} = 1, and the matrix recursion.
CheckReport verify_distribution(const ProbabilityTable& table);

/// The two entrywise conditions
///   sum_j alpha_i P_{i,j} = alpha_{i-1} beta_1 P_{i-1,1}
///   alpha_i beta_j P_{i,j} = alpha_{i-1} beta_{j+1} P_{i-1,j+1}
/// checked directly on the table for every 1 <= i <= K-D.
CheckReport check_privacy_conditions(const ProbabilityTable& table);

/// sum_j P_{0,j} == (DL+1)^(1-K/D); throws ParameterError unless D divides K.
bool verify_divisible_identity(const SchemeParams& params);

struct LpReport {
    bool ok = true;
    Rational optimum;                         ///< f_{j*}/g_{j*}
    unsigned argmax = 1;                      ///< j*
    std::vector<Rational> vertex_objectives;  ///< f_j/g_j for the vertex e_j/g_j
    std::size_t random_points = 0;
    std::vector<std::string> findings;
};

/// Confirms the last table row maximizes f^T x over {g^T x = 1, x >= 0}:
/// every vertex e_j/g_j and `trials` random convex combinations of them stay
/// at or below the objective of the chosen row.
LpReport lp_optimality_check(const SchemeParams& params, std::size_t trials, Seed seed);

} // namespace mpir::ratemath
