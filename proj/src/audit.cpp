#include "mpir/audit.hpp"

#include "mpir/errors.hpp"

#include <bit>
#include <functional>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

namespace mpir::audit {

namespace {

/// Calls fn with every k-subset of {0, ..., n-1}, ascending, in lexicographic order.
void for_each_subset(unsigned n, unsigned k, const std::function<void(const std::vector<unsigned>&)>& fn)
{
    if (k > n) {
        return;
    }
    std::vector<unsigned> idx(k);
    std::iota(idx.begin(), idx.end(), 0u);
    while (true) {
        fn(idx);
        int pos = static_cast<int>(k) - 1;
        while (pos >= 0 && idx[pos] == n - k + static_cast<unsigned>(pos)) {
            --pos;
        }
        if (pos < 0) {
            return;
        }
        ++idx[pos];
        for (unsigned r = pos + 1; r < k; ++r) {
            idx[r] = idx[r - 1] + 1;
        }
    }
}

std::uint64_t mask_of(const scheme::DemandSet& w)
{
    std::uint64_t m = 0;
    for (unsigned k : w.indices()) {
        m |= std::uint64_t{1} << (k - 1);
    }
    return m;
}

} // namespace

SupportDescriptor SupportDescriptor::of(const std::vector<unsigned>& messages)
{
    SupportDescriptor s;
    for (unsigned k : messages) {
        if (k < 1 || k > 64) {
            throw ParameterError("support index out of range");
        }
        s.mask |= std::uint64_t{1} << (k - 1);
    }
    return s;
}

std::vector<unsigned> SupportDescriptor::messages() const
{
    std::vector<unsigned> out;
    for (unsigned k = 1; k <= 64; ++k) {
        if (mask & (std::uint64_t{1} << (k - 1))) {
            out.push_back(k);
        }
    }
    return out;
}

unsigned SupportDescriptor::size() const noexcept
{
    return static_cast<unsigned>(std::popcount(mask));
}

std::string SupportDescriptor::to_string() const
{
    std::string s = "{";
    bool first = true;
    for (unsigned k : messages()) {
        s += (first ? "" : ",") + std::to_string(k);
        first = false;
    }
    return s + "}";
}

SupportDistribution exact_support_distribution(const ratemath::ProbabilityTable& table,
                                               const scheme::DemandSet& demand)
{
    const auto& p = table.params;
    if (p.K > 64) {
        throw ParameterError("support enumeration limited to K <= 64");
    }
    if (demand.message_count() != p.K || demand.size() != p.D) {
        throw ParameterError("demand set does not match table parameters");
    }
    const auto interference = demand.complement();
    const auto& wanted = demand.indices();
    const unsigned top = p.K - p.D;
    const Rational per_vector = fraction(1, p.N);

    SupportDistribution dist;
    for (unsigned i = 0; i <= top; ++i) {
        const Rational pick_h = fraction(1, binomial(top, i));
        for (unsigned j = 1; j <= p.D; ++j) {
            const Rational& pij = table.p(i, j);
            if (sgn(pij) == 0) {
                continue;
            }
            const Rational pick_g = fraction(1, binomial(p.D, j));
            const Rational atom = pij * pick_h * pick_g * per_vector;
            for_each_subset(top, i, [&](const std::vector<unsigned>& h_support) {
                std::uint64_t base = 0;
                for (unsigned pos : h_support) {
                    base |= std::uint64_t{1} << (interference[pos] - 1);
                }
                for_each_subset(p.D, j, [&](const std::vector<unsigned>& row1) {
                    dist[SupportDescriptor{base}] += atom; // v_1
                    for (unsigned l = 1; l <= p.L; ++l) {
                        for (unsigned m = 1; m <= p.D; ++m) {
                            std::uint64_t s = base;
                            for (unsigned c : scheme::shifted_support(row1, p.D, m)) {
                                s |= std::uint64_t{1} << (wanted[c] - 1);
                            }
                            dist[SupportDescriptor{s}] += atom;
                        }
                    }
                });
            });
        }
    }
    return dist;
}

Rational closed_form_support_probability(const ratemath::ProbabilityTable& table,
                                         const scheme::DemandSet& demand, SupportDescriptor s)
{
    const auto& p = table.params;
    const std::uint64_t w = mask_of(demand);
    const unsigned I = static_cast<unsigned>(std::popcount(s.mask & ~w));
    const unsigned J = static_cast<unsigned>(std::popcount(s.mask & w));
    if (I > p.K - p.D || J > p.D) {
        return 0;
    }
    const Rational alpha = fraction(1, binomial(p.K - p.D, I));
    if (J == 0) {
        return fraction(1, p.N) * alpha * table.row_sum(I);
    }
    if (J < p.D) {
        return fraction(p.L, p.N) * alpha * fraction(p.D, binomial(p.D, J)) * table.p(I, J);
    }
    return fraction(p.D * p.L, p.N) * alpha * table.p(I, p.D);
}

PrivacyReport audit_privacy(const ratemath::ProbabilityTable& table)
{
    PrivacyReport rep;
    rep.params = table.params;
    const auto demands = scheme::all_demand_sets(table.params.K, table.params.D);

    std::vector<SupportDistribution> dists;
    dists.reserve(demands.size());
    for (const auto& w : demands) {
        dists.push_back(exact_support_distribution(table, w));
        const auto& dist = dists.back();
        DemandDigest dg{w, dist.size(), 0, {}};
        const std::uint64_t wm = mask_of(w);
        for (const auto& [s, prob] : dist) {
            dg.total += prob;
            const unsigned I = static_cast<unsigned>(std::popcount(s.mask & ~wm));
            const unsigned J = static_cast<unsigned>(std::popcount(s.mask & wm));
            dg.mass_by_signature[{I, J}] += prob;
        }
        if (dg.total != 1) {
            rep.pass = false;
            rep.findings.push_back("support distribution for W=" + w.to_string() + " sums to " +
                                   to_fraction_string(dg.total));
        }
        rep.digests.push_back(std::move(dg));
    }

    const auto& ref = dists.front();
    for (std::size_t n = 1; n < dists.size() && !rep.witness; ++n) {
        const auto& cur = dists[n];
        auto lookup = [](const SupportDistribution& d, SupportDescriptor s) {
            auto it = d.find(s);
            return it == d.end() ? Rational(0) : it->second;
        };
        // walk the union of keys in order; the first disagreement is the witness
        auto a = ref.begin();
        auto b = cur.begin();
        while (a != ref.end() || b != cur.end()) {
            SupportDescriptor s;
            if (b == cur.end() || (a != ref.end() && a->first < b->first)) {
                s = (a++)->first;
            } else if (a == ref.end() || b->first < a->first) {
                s = (b++)->first;
            } else {
                s = a->first;
                ++a;
                ++b;
            }
            const Rational pa = lookup(ref, s);
            const Rational pb = lookup(cur, s);
            if (pa != pb) {
                rep.pass = false;
                rep.witness = PrivacyWitness{demands.front(), demands[n], s, pa, pb};
                break;
            }
        }
    }
    return rep;
}

std::string PrivacyReport::to_text() const
{
    std::ostringstream os;
    os << "privacy audit (exact, support level): " << params.to_string() << '\n';
    os << "  W            atoms  total   mass by (I,J)\n";
    for (const auto& d : digests) {
        os << "  " << d.demand.to_string();
        for (std::size_t pad = d.demand.to_string().size(); pad < 12; ++pad) {
            os << ' ';
        }
        os << ' ' << d.atoms << "  " << to_fraction_string(d.total) << "  ";
        for (const auto& [sig, mass] : d.mass_by_signature) {
            os << " (" << sig.first << ',' << sig.second << ")=" << to_fraction_string(mass);
        }
        os << '\n';
    }
    for (const auto& f : findings) {
        os << "  finding: " << f << '\n';
    }
    if (witness) {
        os << "  witness: S=" << witness->support.to_string() << "  P(S|W=" << witness->reference.to_string()
           << ")=" << to_fraction_string(witness->p_reference) << "  P(S|W="
           << witness->offending.to_string() << ")=" << to_fraction_string(witness->p_offending) << '\n';
    }
    os << "verdict: " << (pass ? "PASS" : "FAIL") << '\n';
    return os.str();
}

std::string PrivacyReport::to_records() const
{
    std::ostringstream os;
    os << "audit=privacy_exact\n";
    os << "K=" << params.K << "\nD=" << params.D << "\nL=" << params.L << "\nN=" << params.N << '\n';
    os << "demand_sets=" << digests.size() << '\n';
    for (const auto& d : digests) {
        os << "digest." << d.demand.to_string() << ".atoms=" << d.atoms << '\n';
        os << "digest." << d.demand.to_string() << ".total=" << to_fraction_string(d.total) << '\n';
    }
    if (witness) {
        os << "witness.support=" << witness->support.to_string() << '\n';
        os << "witness.reference=" << witness->reference.to_string() << '\n';
        os << "witness.reference_p=" << to_fraction_string(witness->p_reference) << '\n';
        os << "witness.offending=" << witness->offending.to_string() << '\n';
        os << "witness.offending_p=" << to_fraction_string(witness->p_offending) << '\n';
    }
    os << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return os.str();
}

ClosedFormReport compare_closed_form(const ratemath::ProbabilityTable& table)
{
    const auto& p = table.params;
    if (p.K > 20) {
        throw ParameterError("closed-form comparison limited to K <= 20");
    }
    ClosedFormReport rep;
    for (const auto& w : scheme::all_demand_sets(p.K, p.D)) {
        const auto dist = exact_support_distribution(table, w);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.K); ++mask) {
            const SupportDescriptor s{mask};
            auto it = dist.find(s);
            const Rational oracle = it == dist.end() ? Rational(0) : it->second;
            const Rational closed = closed_form_support_probability(table, w, s);
            ++rep.compared;
            if (oracle != closed) {
                rep.ok = false;
                rep.mismatches.push_back("W=" + w.to_string() + " S=" + s.to_string() + ": oracle " +
                                         to_fraction_string(oracle) + " vs closed form " +
                                         to_fraction_string(closed));
            }
        }
    }
    return rep;
}

ValueAuditReport statistical_value_audit(const SchemeParams& params, std::size_t trials,
                                         double significance, Seed seed, scheme::SamplerBias bias)
{
    params.validate();
    if (trials == 0) {
        throw ParameterError("value audit needs at least one trial");
    }
    std::uint64_t space = 1;
    for (unsigned n = 0; n < params.query_length(); ++n) {
        space *= params.q;
        if (space > kMaxValueCategories) {
            throw ParameterError("query value space q^(K*L) too large to tabulate for " +
                                 params.to_string());
        }
    }

    ValueAuditReport rep;
    rep.params = params;
    rep.trials_per_demand = trials;
    rep.significance = significance;

    const auto table = ratemath::compute_ptable(params);
    const scheme::QueryBuilder builder(table, bias);
    const auto demands = scheme::all_demand_sets(params.K, params.D);
    rep.demand_sets = demands.size();

    std::vector<std::vector<std::uint64_t>> counts(demands.size(), std::vector<std::uint64_t>(space, 0));
    for (std::size_t w = 0; w < demands.size(); ++w) {
        Rng rng(derive_seed(seed, w));
        for (std::size_t t = 0; t < trials; ++t) {
            const auto plan = builder.build(demands[w], rng);
            std::uint64_t code = 0;
            for (gf::Symbol c : plan.queries.front().coefficients.values()) {
                code = code * params.q + c;
            }
            ++counts[w][code];
        }
    }

    std::vector<std::uint64_t> col(space, 0);
    for (const auto& row : counts) {
        for (std::uint64_t c = 0; c < space; ++c) {
            col[c] += row[c];
        }
    }
    std::size_t used = 0;
    for (auto c : col) {
        used += c != 0;
    }
    rep.categories = used;

    if (demands.size() < 2 || used < 2) {
        // a single demand set (K = D) has nothing to leak
        rep.p_value = 1.0;
        rep.pass = true;
        return rep;
    }

    const double total = static_cast<double>(trials) * static_cast<double>(demands.size());
    double chi2 = 0.0;
    for (const auto& row : counts) {
        const double row_total = static_cast<double>(trials);
        for (std::uint64_t c = 0; c < space; ++c) {
            if (col[c] == 0) {
                continue;
            }
            const double expected = row_total * static_cast<double>(col[c]) / total;
            const double diff = static_cast<double>(row[c]) - expected;
            chi2 += diff * diff / expected;
        }
    }
    rep.chi_square = chi2;
    rep.dof = static_cast<unsigned>((demands.size() - 1) * (used - 1));
    const boost::math::chi_squared_distribution<double> dist(rep.dof);
    rep.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
    rep.pass = rep.p_value >= significance;
    return rep;
}

std::string ValueAuditReport::to_text() const
{
    std::ostringstream os;
    os << "privacy audit (statistical, value level): " << params.to_string() << '\n';
    os << "  demand sets: " << demand_sets << ", trials per demand set: " << trials_per_demand << '\n';
    os << "  observed query values: " << categories << '\n';
    os << "  chi-square = " << chi_square << " on " << dof << " dof, p = " << p_value
       << " (alpha = " << significance << ")\n";
    os << "verdict: " << (pass ? "PASS" : "FAIL") << '\n';
    return os.str();
}

std::string ValueAuditReport::to_records() const
{
    std::ostringstream os;
    os << "audit=privacy_value\n";
    os << "K=" << params.K << "\nD=" << params.D << "\nL=" << params.L << "\nq=" << params.q << '\n';
    os << "trials_per_demand=" << trials_per_demand << '\n';
    os << "categories=" << categories << '\n';
    os << "chi_square=" << chi_square << "\ndof=" << dof << "\np_value=" << p_value << '\n';
    os << "alpha=" << significance << '\n';
    os << "verdict=" << (pass ? "pass" : "fail") << '\n';
    return os.str();
}

} // namespace mpir::audit
