#pragma once

// Privacy auditors.
//
// The exact audit enumerates the user's randomness at support level (query
// type, interference subset, row-1 pattern of G, which constructed vector
// lands at the server) and checks that the distribution of the message
// support seen by one server is the same for every demand set. The value
// level is covered statistically by a chi-square homogeneity test at a tiny
// parameter point.

#include "mpir/params.hpp"
#include "mpir/random.hpp"
#include "mpir/ratemath.hpp"
#include "mpir/scheme.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mpir::audit {

/// Set of messages contributing one subpacket to a query; bit k-1 for message k.
struct SupportDescriptor {
    std::uint64_t mask = 0;

    static SupportDescriptor of(const std::vector<unsigned>& messages);
    std::vector<unsigned> messages() const;
    unsigned size() const noexcept;
    std::string to_string() const;

    friend auto operator<=>(const SupportDescriptor&, const SupportDescriptor&) = default;
};

using SupportDistribution = std::map<SupportDescriptor, Rational>;

/// Brute-force distribution of the support received by a fixed server given
/// the demand set. Only supports with positive probability appear.
SupportDistribution exact_support_distribution(const ratemath::ProbabilityTable& table,
                                               const scheme::DemandSet& demand);

/// Case formulas for P(S | W) keyed on I = |S \ W| and J = |S n W|.
Rational closed_form_support_probability(const ratemath::ProbabilityTable& table,
                                         const scheme::DemandSet& demand, SupportDescriptor s);

struct PrivacyWitness {
    scheme::DemandSet reference;
    scheme::DemandSet offending;
    SupportDescriptor support;
    Rational p_reference;
    Rational p_offending;
};

struct DemandDigest {
    scheme::DemandSet demand;
    std::size_t atoms = 0;
    Rational total;
    /// probability mass per (I, J) signature relative to this demand set
    std::map<std::pair<unsigned, unsigned>, Rational> mass_by_signature;
};

struct PrivacyReport {
    bool pass = true;
    SchemeParams params;
    std::vector<DemandDigest> digests;
    std::optional<PrivacyWitness> witness;
    std::vector<std::string> findings; ///< e.g. a per-W total that is not 1

    std::string to_text() const;
    /// One key=value pair per line.
    std::string to_records() const;
};

/// Exact audit across all C(K, D) demand sets. Distributions are compared
/// support-for-support (absolute message sets), so a pass means
/// P(S | W) is literally identical for every W.
PrivacyReport audit_privacy(const ratemath::ProbabilityTable& table);

struct ClosedFormReport {
    bool ok = true;
    std::size_t compared = 0;
    std::vector<std::string> mismatches;
};

/// Enumeration oracle vs. case formulas over every demand set and every
/// subset of [K]. Requires K <= 20.
ClosedFormReport compare_closed_form(const ratemath::ProbabilityTable& table);

inline constexpr std::uint64_t kMaxValueCategories = std::uint64_t{1} << 20;

struct ValueAuditReport {
    bool pass = true;
    SchemeParams params;
    std::size_t trials_per_demand = 0;
    std::size_t demand_sets = 0;
    std::size_t categories = 0; ///< query values observed at least once
    double chi_square = 0.0;
    unsigned dof = 0;
    double p_value = 1.0;
    double significance = 0.0;

    std::string to_text() const;
    std::string to_records() const;
};

/// Samples the full query received by server 1 under every demand set and runs
/// a chi-square homogeneity test across demand sets. Passes iff
/// p_value >= significance. Throws ParameterError when q^(K*L) exceeds
/// kMaxValueCategories or trials == 0.
ValueAuditReport statistical_value_audit(const SchemeParams& params, std::size_t trials,
                                         double significance, Seed seed,
                                         scheme::SamplerBias bias = {});

} // namespace mpir::audit
