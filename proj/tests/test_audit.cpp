#include "support.hpp"

#include "mpir/audit.hpp"
#include "mpir/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace mpir;
using namespace mpir::audit;

TEST_CASE("support descriptors")
{
    const auto s = SupportDescriptor::of({1, 3, 4});
    CHECK(s.mask == 0b1101);
    CHECK(s.size() == 3);
    CHECK(s.messages() == std::vector<unsigned>{1, 3, 4});
    CHECK(s.to_string() == "{1,3,4}");
    CHECK(SupportDescriptor::of({}).to_string() == "{}");
}

TEST_CASE("support probabilities of the worked instance")
{
    const auto table = ratemath::compute_ptable(SchemeParams::make(4, 2, 2));
    for (const auto& w : scheme::all_demand_sets(4, 2)) {
        const auto dist = exact_support_distribution(table, w);
        const auto at = [&](std::vector<unsigned> m) {
            const auto it = dist.find(SupportDescriptor::of(m));
            return it == dist.end() ? Rational(0) : it->second;
        };
        CAPTURE(w.to_string());
        CHECK(at({}) == Rational(1, 25));
        for (unsigned k = 1; k <= 4; ++k) {
            CHECK(at({k}) == Rational(4, 75));
        }
        CHECK(at({1, 3, 4}) == Rational(8, 75));
        CHECK(at({2, 3, 4}) == Rational(8, 75));
        CHECK(at({1, 2, 3, 4}) == 0);
        Rational total = 0;
        for (const auto& [s, pr] : dist) {
            total += pr;
        }
        CHECK(total == 1);
        CHECK(closed_form_support_probability(table, w, SupportDescriptor::of({1})) == Rational(4, 75));
        CHECK(closed_form_support_probability(table, w, SupportDescriptor::of({})) == Rational(1, 25));
    }
}

TEST_CASE("closed form agrees with enumeration on the grid")
{
    for (unsigned K = 1; K <= 6; ++K)
        for (unsigned D = 1; D <= K; ++D)
            for (unsigned L = 1; L <= 2; ++L) {
                CAPTURE(K);
                CAPTURE(D);
                CAPTURE(L);
                const auto rep = compare_closed_form(ratemath::compute_ptable(SchemeParams::make(K, D, L)));
                CHECK(rep.ok);
                CHECK(rep.compared > 0);
            }
}

TEST_CASE("exact distribution matches sampled plans")
{
    const auto params = SchemeParams::make(5, 2, 2, 5);
    const auto table = ratemath::compute_ptable(params);
    const scheme::DemandSet w(5, {2, 5});
    const auto exact = exact_support_distribution(table, w);
    const scheme::QueryBuilder builder(table);
    Rng rng(17);
    const std::size_t n = 40000;
    std::map<SupportDescriptor, std::size_t> seen;
    for (std::size_t t = 0; t < n; ++t) {
        const auto plan = builder.build(w, rng);
        ++seen[SupportDescriptor::of(plan.queries[0].message_support(params.L))];
    }
    for (const auto& [s, count] : seen) {
        CHECK(exact.count(s) == 1);
    }
    for (const auto& [s, pr] : exact) {
        const double p = pr.get_d();
        const double sd = std::sqrt(p * (1 - p) / n);
        CAPTURE(s.to_string());
        CHECK(std::abs(static_cast<double>(seen[s]) / n - p) <= 4.5 * sd);
    }
}

TEST_CASE("privacy audit passes on the grid")
{
    for (unsigned K = 2; K <= 6; ++K)
        for (unsigned D = 1; D <= K; ++D)
            for (unsigned L = 1; L <= 2; ++L) {
                CAPTURE(K);
                CAPTURE(D);
                CAPTURE(L);
                const auto rep = audit_privacy(ratemath::compute_ptable(SchemeParams::make(K, D, L)));
                CHECK(rep.pass);
                CHECK_FALSE(rep.witness.has_value());
                CHECK(rep.digests.size() == binomial(K, D).get_ui());
                for (const auto& d : rep.digests) {
                    CHECK(d.total == 1);
                }
            }
}

TEST_CASE("privacy audit catches the swapped table")
{
    auto table = ratemath::compute_ptable(SchemeParams::make(4, 2, 2));
    table.p(1, 1) = Rational(5, 15);
    table.p(1, 2) = Rational(3, 15);
    const auto rep = audit_privacy(table);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->p_reference != rep.witness->p_offending);
    CHECK(rep.to_text().find("FAIL") != std::string::npos);
    CHECK(rep.to_records().find("witness") != std::string::npos);
}

TEST_CASE("privacy audit catches every injected mutation")
{
    for (unsigned K = 2; K <= 5; ++K)
        for (unsigned D = 1; D < K; ++D)
            for (unsigned L = 1; L <= 2; ++L) {
                CAPTURE(K);
                CAPTURE(D);
                CAPTURE(L);
                const auto table = ratemath::compute_ptable(SchemeParams::make(K, D, L));
                const auto mutations = testing::table_mutations(table, 3);
                CHECK(mutations.size() == 3);
                for (const auto& m : mutations) {
                    CHECK(m.total() == 1);
                    const auto rep = audit_privacy(m);
                    CHECK_FALSE(rep.pass);
                    CHECK(rep.witness.has_value());
                    CHECK_FALSE(ratemath::check_privacy_conditions(m));
                }
            }
}

TEST_CASE("value-level audit")
{
    const auto params = SchemeParams::make(3, 2, 1, 3);
    const auto honest = statistical_value_audit(params, 20000, 0.001, 5);
    CHECK(honest.pass);
    CHECK(honest.demand_sets == 3);
    CHECK(honest.dof > 0);

    const auto biased = statistical_value_audit(params, 20000, 0.001, 5, {false, true});
    CHECK_FALSE(biased.pass);
    CHECK(biased.p_value < 1e-6);

    const auto pinned = statistical_value_audit(SchemeParams::make(4, 2, 1, 3), 20000, 0.001, 5, {true, false});
    CHECK_FALSE(pinned.pass);

    const auto trivial = statistical_value_audit(SchemeParams::make(2, 2, 1, 3), 100, 0.001, 5);
    CHECK(trivial.pass);

    CHECK_THROWS_AS(statistical_value_audit(params, 0, 0.001, 5), ParameterError);
    CHECK_THROWS_AS(statistical_value_audit(SchemeParams::make(8, 2, 3, 5), 10, 0.001, 5), ParameterError);
}
