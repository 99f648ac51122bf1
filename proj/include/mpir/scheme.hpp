#pragma once

// User side of the protocol: draw a query type (i, j), build the sparse
// interference vector h and the circulant-support demand matrix G, lay out the
// N coefficient vectors, hand them to servers in random order, and decode the
// demand subpackets from the answers.

#include "mpir/gf.hpp"
#include "mpir/params.hpp"
#include "mpir/random.hpp"
#include "mpir/ratemath.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mpir::scheme {

/// The D demanded message indices, 1-based and ascending.
class DemandSet {
public:
    /// Sorts the indices; throws ParameterError on duplicates, out-of-range
    /// indices or an empty set.
    DemandSet(unsigned K, std::vector<unsigned> indices);

    unsigned message_count() const noexcept { return K_; }
    std::size_t size() const noexcept { return indices_.size(); }
    const std::vector<unsigned>& indices() const noexcept { return indices_; }
    /// Interference indices, ascending.
    std::vector<unsigned> complement() const;
    bool contains(unsigned k) const;
    std::string to_string() const;

    friend bool operator==(const DemandSet&, const DemandSet&) = default;

private:
    unsigned K_;
    std::vector<unsigned> indices_;
};

/// Every D-subset of [K] in lexicographic order.
std::vector<DemandSet> all_demand_sets(unsigned K, unsigned D);

/// The user's private relabeling of each message's subpackets.
class SubpacketLabeling {
public:
    /// perm[k-1][l-1] is the physical (storage-order) index of logical
    /// subpacket l of message k, 1-based.
    explicit SubpacketLabeling(std::vector<std::vector<unsigned>> perm);

    static SubpacketLabeling identity(unsigned K, unsigned L);
    static SubpacketLabeling random(unsigned K, unsigned L, Rng& rng);

    unsigned physical(unsigned k, unsigned l) const { return perm_.at(k - 1).at(l - 1); }
    unsigned subpackets() const noexcept { return perm_.empty() ? 0 : static_cast<unsigned>(perm_[0].size()); }

private:
    std::vector<std::vector<unsigned>> perm_;
};

/// Coefficients over the K*L physical subpackets; slot (k, l) at (k-1)*L + (l-1).
struct QueryVector {
    gf::FieldVector coefficients;

    bool is_zero() const noexcept { return coefficients.is_zero(); }
    gf::Symbol coefficient(unsigned k, unsigned l, unsigned L) const
    {
        return coefficients[(k - 1) * L + (l - 1)];
    }
    /// Messages with at least one nonzero coefficient, ascending.
    std::vector<unsigned> message_support(unsigned L) const;
    bool one_subpacket_per_message(unsigned L) const;

    friend bool operator==(const QueryVector&, const QueryVector&) = default;
};

struct Pair {
    unsigned i = 0; ///< interference messages touched
    unsigned j = 1; ///< demand messages per combination

    friend bool operator==(const Pair&, const Pair&) = default;
    friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// A server's reply: m/L symbols, or empty for an all-zero query.
struct AnswerShare {
    std::vector<gf::Symbol> symbols;

    bool empty() const noexcept { return symbols.empty(); }
    friend bool operator==(const AnswerShare&, const AnswerShare&) = default;
};

struct QueryPlan {
    SchemeParams params;
    DemandSet demand;
    SubpacketLabeling labeling;
    Pair pair;
    gf::FieldVector h;               ///< length K-D, exactly pair.i nonzeros
    gf::FieldMatrix G;               ///< D x D, pair.j nonzeros per row, invertible
    std::vector<unsigned> g_support; ///< 0-based support of row 1 of G
    /// constructed[n] is v_{n+1} in construction order.
    std::vector<QueryVector> constructed;
    /// permutation[n] = index into `constructed` of the vector sent to server n+1.
    std::vector<unsigned> permutation;
    std::vector<QueryVector> queries; ///< queries[n] = constructed[permutation[n]]
};

/// Exact sampler over the table's atoms: one uniform integer below the common
/// denominator selects the pair.
class PairSampler {
public:
    /// Throws ParameterError unless the table has non-negative entries summing to 1.
    explicit PairSampler(const ratemath::ProbabilityTable& table);

    Pair sample(Rng& rng) const;
    const std::vector<Pair>& atoms() const noexcept { return atoms_; }

private:
    std::vector<Pair> atoms_;
    std::vector<Integer> cumulative_;
    Integer denominator_;
    std::vector<std::uint64_t> cumulative_small_; // populated when the denominator fits in 64 bits
    std::uint64_t denominator_small_ = 0;
};

Pair sample_pair(const ratemath::ProbabilityTable& table, Rng& rng);

/// Exactly i nonzero entries at a uniformly chosen support; each nonzero value
/// uniform over F_q \ {0}.
gf::FieldVector sample_sparse_vector(unsigned i, unsigned len, unsigned q, Rng& rng);

inline constexpr unsigned kMaxInvertAttempts = 1000;

/// Support of row m (1-based) of a circulant-support matrix with row-1 support `first`.
std::vector<unsigned> shifted_support(std::span<const unsigned> first, unsigned D, unsigned m);

/// D x D matrix: row 1 support uniform over the j-subsets, each later row the
/// previous support shifted one position right (mod D), nonzero values uniform
/// over F_q \ {0} and redrawn until the matrix is invertible. Throws
/// ConstructionError after kMaxInvertAttempts draws.
gf::FieldMatrix sample_regular_matrix(unsigned j, unsigned D, unsigned q, Rng& rng,
                                      std::vector<unsigned>* row1_support = nullptr);

/// Test-only sampler distortions used to confirm the auditors can see a leak.
struct SamplerBias {
    bool pin_interference_support = false; ///< h always uses the first i interference slots
    bool unit_interference_values = false; ///< nonzero h entries always 1
};

/// Lays out v_1..v_N for fixed randomness and applies the server permutation.
QueryPlan assemble_plan(const SchemeParams& params, const DemandSet& demand,
                        SubpacketLabeling labeling, Pair pair, gf::FieldVector h,
                        gf::FieldMatrix G, std::vector<unsigned> g_support,
                        std::vector<unsigned> permutation);

/// Reusable plan factory for one table. Draw order on the stream: pair,
/// h support, h values, G support, G values (with rejection), subpacket
/// labelings, server permutation.
class QueryBuilder {
public:
    explicit QueryBuilder(const ratemath::ProbabilityTable& table, SamplerBias bias = {});

    QueryPlan build(const DemandSet& demand, Rng& rng) const;
    const SchemeParams& params() const noexcept { return params_; }

private:
    SchemeParams params_;
    PairSampler sampler_;
    SamplerBias bias_;
};

QueryPlan build_query_plan(const SchemeParams& params, const DemandSet& demand,
                           const ratemath::ProbabilityTable& table, Rng& rng);

/// Recovers the D demand messages (m symbols each, in ascending demand order).
/// Throws ParameterError on shape mismatches and IntegrityError when the
/// demand system is singular.
std::vector<gf::FieldVector> decode(const QueryPlan& plan, std::span<const AnswerShare> answers);

} // namespace mpir::scheme
