#pragma once

// End-to-end driver: runs the protocol against in-process servers, measures
// download cost, enumerates answer-set types and renders reports.

#include "mpir/params.hpp"
#include "mpir/random.hpp"
#include "mpir/ratemath.hpp"
#include "mpir/scheme.hpp"
#include "mpir/server.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mpir::harness {

struct TrialResult {
    scheme::DemandSet demand;
    scheme::Pair pair;
    unsigned downloaded_subpacket_units = 0; ///< non-empty answers, each m/L symbols
    bool decoded_ok = false;
    Seed seed = 0;
};

TrialResult run_trial(const server::MessageStore& store, const scheme::DemandSet& demand,
                      const scheme::QueryBuilder& builder, Seed seed);
TrialResult run_trial(const server::MessageStore& store, const scheme::DemandSet& demand,
                      const ratemath::ProbabilityTable& table, Seed seed);

/// Download is counted in message units (one unit = m symbols), so the rate is
/// D / mean units.
struct RateReport {
    SchemeParams params;
    Rational theoretical_rate;
    Rational expected_download_units;
    Rational capacity_upper;
    std::optional<Rational> capacity_exact; ///< only when D divides K
    std::size_t trials = 0;
    double mean_download_units = 0.0;
    double empirical_rate = 0.0;
    double standard_error = 0.0; ///< of empirical_rate (delta method)
    std::size_t decode_failures = 0;

    /// Throws std::logic_error if theoretical_rate exceeds capacity_upper.
    void check() const;
};

/// Theoretical side of the report only (trials = 0).
RateReport theoretical_report(const ratemath::ProbabilityTable& table);

/// Uniform demand sets; trial t uses derive_seed(seed, t).
RateReport empirical_rate(const server::MessageStore& store, std::size_t trials, Seed seed);
/// Generates an in-memory store from the seed first.
RateReport empirical_rate(const SchemeParams& params, std::size_t trials, Seed seed);

struct AnswerTypeRow {
    scheme::Pair pair;
    std::vector<unsigned> h_support; ///< 0-based positions among the interference messages
    std::vector<unsigned> g_support; ///< 0-based support of row 1 of G
    std::vector<std::string> answers; ///< Y_1 .. Y_N, symbolic
    Rational probability;
    bool zero_class = false; ///< P_{i,j} = 0: listed but unreachable
};

/// One row per (i, j, interference subset, row-1 pattern of G), probability
/// P_{i,j} / (C(K-D, i) C(D, j)). Demand messages are lettered a, b, ...
/// followed by the interference messages (K <= 26).
std::vector<AnswerTypeRow> enumerate_answer_types(const SchemeParams& params);

std::string render_answer_types(const std::vector<AnswerTypeRow>& rows, bool include_zero = true);

std::string render_ptable(const ratemath::ProbabilityTable& table);

/// Text form of the rates report; fractions exact, decimals at 6 significant digits.
std::string rates_text(const ratemath::ProbabilityTable& table, const RateReport* empirical = nullptr);

/// {"params", "ptable", "rate", "capacity_upper", "capacity_exact", "empirical", "verdict", ...}
nlohmann::json rates_json(const ratemath::ProbabilityTable& table, const RateReport* empirical = nullptr);

struct WalkthroughResult {
    bool ok = true;
    std::string text;
};

/// Worked K=4, D=2, L=2 instance: table, one fixed query set decoded by hand,
/// the answer-type table, the support probabilities and the rate.
WalkthroughResult run_walkthrough(Seed seed = 1);

} // namespace mpir::harness
