#include "mpir/harness.hpp"

#include "mpir/audit.hpp"
#include "mpir/errors.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mpir::harness {

namespace {

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

std::string message_label(bool demand, unsigned position, unsigned K, unsigned D)
{
    if (K <= 26) {
        return std::string(1, static_cast<char>('a' + (demand ? position : D + position)));
    }
    return (demand ? "w" : "u") + std::to_string(position + 1);
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) {
        s.append(width - s.size(), ' ');
    }
    return s;
}

} // namespace

TrialResult run_trial(const server::MessageStore& store, const scheme::DemandSet& demand,
                      const scheme::QueryBuilder& builder, Seed seed)
{
    if (!(store.params() == builder.params())) {
        throw ParameterError("store and query builder disagree on parameters");
    }
    Rng rng(seed);
    const auto plan = builder.build(demand, rng);
    std::vector<scheme::AnswerShare> answers;
    answers.reserve(plan.queries.size());
    unsigned units = 0;
    for (const auto& query : plan.queries) {
        answers.push_back(server::answer(store, query));
        units += !answers.back().empty();
    }
    const auto decoded = scheme::decode(plan, answers);
    bool ok = decoded.size() == demand.size();
    for (std::size_t r = 0; ok && r < decoded.size(); ++r) {
        ok = decoded[r] == store.message(demand.indices()[r]);
    }
    return {demand, plan.pair, units, ok, seed};
}

TrialResult run_trial(const server::MessageStore& store, const scheme::DemandSet& demand,
                      const ratemath::ProbabilityTable& table, Seed seed)
{
    return run_trial(store, demand, scheme::QueryBuilder(table), seed);
}

void RateReport::check() const
{
    if (theoretical_rate > capacity_upper) {
        throw std::logic_error("achievable rate " + to_fraction_string(theoretical_rate) +
                               " exceeds the capacity upper bound " + to_fraction_string(capacity_upper));
    }
}

RateReport theoretical_report(const ratemath::ProbabilityTable& table)
{
    const auto& p = table.params;
    RateReport rep;
    rep.params = p;
    rep.theoretical_rate = ratemath::achievable_rate(p);
    rep.expected_download_units = ratemath::expected_download_units(table);
    rep.capacity_upper = ratemath::capacity_upper_bound(p.K, p.D, p.N);
    if (p.K % p.D == 0) {
        rep.capacity_exact = ratemath::capacity_divisible(p.K, p.D, p.N);
    }
    rep.check();
    return rep;
}

RateReport empirical_rate(const server::MessageStore& store, std::size_t trials, Seed seed)
{
    if (trials < 1) {
        throw ParameterError("need at least one trial");
    }
    const auto& p = store.params();
    const auto table = ratemath::compute_ptable(p);
    RateReport rep = theoretical_report(table);
    rep.trials = trials;

    const scheme::QueryBuilder builder(table);
    const auto demands = scheme::all_demand_sets(p.K, p.D);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Seed trial_seed = derive_seed(seed, t);
        Rng pick(derive_seed(trial_seed, 0));
        const auto& demand = demands[pick.uniform(demands.size())];
        const auto result = run_trial(store, demand, builder, trial_seed);
        rep.decode_failures += !result.decoded_ok;
        const double units = static_cast<double>(result.downloaded_subpacket_units) / p.L;
        sum += units;
        sum_sq += units * units;
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    const double var = trials > 1 ? (sum_sq - n * mean * mean) / (n - 1) : 0.0;
    rep.mean_download_units = mean;
    rep.empirical_rate = p.D / mean;
    rep.standard_error = p.D * std::sqrt(std::max(var, 0.0) / n) / (mean * mean);
    return rep;
}

RateReport empirical_rate(const SchemeParams& params, std::size_t trials, Seed seed)
{
    return empirical_rate(server::MessageStore::random(params, derive_seed(seed, ~0ULL)), trials, seed);
}

std::vector<AnswerTypeRow> enumerate_answer_types(const SchemeParams& params)
{
    params.validate();
    const auto table = ratemath::compute_ptable(params);
    const unsigned K = params.K, D = params.D, L = params.L, top = K - D;

    std::vector<AnswerTypeRow> rows;
    for (unsigned i = 0; i <= top; ++i) {
        for (unsigned j = 1; j <= D; ++j) {
            const Rational share = table.p(i, j) / (Rational(binomial(top, i)) * Rational(binomial(D, j)));
            for_each_subset(top, i, [&](const std::vector<unsigned>& hs) {
                std::string y1;
                for (unsigned pos : hs) {
                    y1 += (y1.empty() ? "" : " + ") + std::string("h") + std::to_string(pos + 1) + "*X" +
                          message_label(false, pos, K, D) + ",1";
                }
                for_each_subset(D, j, [&](const std::vector<unsigned>& gs) {
                    AnswerTypeRow row;
                    row.pair = {i, j};
                    row.h_support = hs;
                    row.g_support = gs;
                    row.probability = share;
                    row.zero_class = sgn(table.p(i, j)) == 0;
                    row.answers.push_back(y1.empty() ? "0" : y1);
                    for (unsigned l = 1; l <= L; ++l) {
                        for (unsigned m = 1; m <= D; ++m) {
                            std::string y;
                            for (unsigned c : scheme::shifted_support(gs, D, m)) {
                                y += (y.empty() ? "" : " + ") + std::string("g") +
                                     std::to_string((m - 1) * D + c + 1) + "*X" +
                                     message_label(true, c, K, D) + "," + std::to_string(l);
                            }
                            if (!y1.empty()) {
                                y += " + " + y1;
                            }
                            row.answers.push_back(y);
                        }
                    }
                    rows.push_back(std::move(row));
                });
            });
        }
    }
    return rows;
}

std::string render_answer_types(const std::vector<AnswerTypeRow>& rows, bool include_zero)
{
    std::ostringstream os;
    for (const auto& r : rows) {
        if (r.zero_class && !include_zero) {
            continue;
        }
        os << '(' << r.pair.i << ',' << r.pair.j << ")  ";
        for (std::size_t n = 0; n < r.answers.size(); ++n) {
            os << "Y" << n + 1 << "=" << pad(r.answers[n], 10) << "  ";
        }
        os << "P=" << to_fraction_string(r.probability);
        if (r.zero_class) {
            os << "  [empty class]";
        }
        os << '\n';
    }
    return os.str();
}

std::string render_ptable(const ratemath::ProbabilityTable& table)
{
    std::ostringstream os;
    os << pad("i\\j", 6);
    for (unsigned j = 1; j <= table.col_count(); ++j) {
        os << pad(std::to_string(j), 14);
    }
    os << '\n';
    for (unsigned i = 0; i < table.row_count(); ++i) {
        os << pad(std::to_string(i), 6);
        for (unsigned j = 1; j <= table.col_count(); ++j) {
            os << pad(to_fraction_string(table.p(i, j)), 14);
        }
        os << '\n';
    }
    return os.str();
}

std::string rates_text(const ratemath::ProbabilityTable& table, const RateReport* empirical)
{
    const RateReport th = theoretical_report(table);
    auto both = [](const Rational& r) { return to_fraction_string(r) + " (" + to_decimal_string(r) + ")"; };
    auto vec = [](const std::vector<Rational>& v) {
        std::string s = "[";
        for (std::size_t n = 0; n < v.size(); ++n) {
            s += (n ? ", " : "") + to_fraction_string(v[n]);
        }
        return s + "]";
    };

    std::ostringstream os;
    os << "params: " << table.params.to_string() << '\n';
    os << "P-table (rows i = 0.." << table.row_count() - 1 << ", columns j = 1.." << table.col_count() << "):\n";
    os << render_ptable(table);
    for (unsigned i = 0; i < table.row_count(); ++i) {
        for (unsigned j = 1; j <= table.col_count(); ++j) {
            os << "P_{" << i << ',' << j << "}=" << to_fraction_string(table.p(i, j)) << '\n';
        }
    }
    os << "beta = " << vec(table.mixing.betas) << '\n';
    os << "f = " << vec(table.f) << '\n';
    os << "g = " << vec(table.g) << '\n';
    os << "j* = " << table.jstar << '\n';
    os << "sum_j P_{0,j} = " << both(table.row_sum(0)) << '\n';
    os << "expected download (message units) = " << both(th.expected_download_units) << '\n';
    os << "R = " << both(th.theoretical_rate) << '\n';
    os << "capacity upper bound = " << both(th.capacity_upper) << '\n';
    if (th.capacity_exact) {
        os << "capacity (D | K) = " << both(*th.capacity_exact) << '\n';
    }
    if (empirical) {
        os << "empirical: trials=" << empirical->trials << " mean units=" << empirical->mean_download_units
           << " rate=" << empirical->empirical_rate << " +/- " << empirical->standard_error
           << " decode failures=" << empirical->decode_failures << '\n';
    }
    return os.str();
}

nlohmann::json rates_json(const ratemath::ProbabilityTable& table, const RateReport* empirical)
{
    const RateReport th = theoretical_report(table);
    const auto& p = table.params;
    auto fracs = [](const std::vector<Rational>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& x : v) {
            a.push_back(to_fraction_string(x));
        }
        return a;
    };

    nlohmann::json j;
    j["params"] = {{"K", p.K}, {"D", p.D}, {"L", p.L}, {"N", p.N}, {"q", p.q}, {"m", p.m}};
    nlohmann::json rows = nlohmann::json::array();
    for (unsigned i = 0; i < table.row_count(); ++i) {
        rows.push_back(fracs(table.row(i)));
    }
    j["ptable"] = rows;
    j["f"] = fracs(table.f);
    j["g"] = fracs(table.g);
    j["jstar"] = table.jstar;
    j["expected_download"] = to_fraction_string(th.expected_download_units);
    j["rate"] = to_fraction_string(th.theoretical_rate);
    j["capacity_upper"] = to_fraction_string(th.capacity_upper);
    j["capacity_exact"] = th.capacity_exact ? nlohmann::json(to_fraction_string(*th.capacity_exact))
                                            : nlohmann::json(nullptr);
    bool ok = static_cast<bool>(ratemath::verify_distribution(table));
    if (empirical) {
        j["empirical"] = {{"trials", empirical->trials},
                          {"mean_download_units", empirical->mean_download_units},
                          {"rate", empirical->empirical_rate},
                          {"standard_error", empirical->standard_error},
                          {"decode_failures", empirical->decode_failures}};
        ok = ok && empirical->decode_failures == 0;
    } else {
        j["empirical"] = nullptr;
    }
    j["verdict"] = ok ? "pass" : "fail";
    return j;
}

WalkthroughResult run_walkthrough(Seed seed)
{
    WalkthroughResult res;
    std::ostringstream os;
    auto expect = [&](bool cond, const std::string& what) {
        os << (cond ? "  ok   " : "  FAIL ") << what << '\n';
        res.ok = res.ok && cond;
    };

    const auto params = SchemeParams::make(4, 2, 2, 7, 4);
    const auto table = ratemath::compute_ptable(params);
    os << "K=4 messages, D=2 demanded (a=X1, b=X2), interference c=X3, d=X4, N=5 servers, L=2\n\n";
    os << "probabilities P_{i,j}:\n" << render_ptable(table) << '\n';
    expect(table.p(0, 1) == Rational(2, 15) && table.p(0, 2) == Rational(1, 15) &&
               table.p(1, 1) == Rational(4, 15) && table.p(1, 2) == Rational(4, 15) &&
               table.p(2, 1) == Rational(4, 15) && table.p(2, 2) == 0,
           "P_{0,1}=2/15 P_{0,2}=1/15 P_{1,1}=P_{1,2}=P_{2,1}=4/15 P_{2,2}=0");

    // (i, j) = (1, 1) with h_2 = 0 and g_2 = g_3 = 0
    const gf::Symbol h1 = 2, g1 = 3, g4 = 5;
    gf::FieldVector h({h1, 0}, params.q);
    gf::FieldMatrix G(2, 2, {g1, 0, 0, g4}, params.q);
    const scheme::DemandSet demand(4, {1, 2});
    const auto plan = scheme::assemble_plan(params, demand, scheme::SubpacketLabeling::identity(4, 2), {1, 1},
                                            h, G, {0}, {0, 1, 2, 3, 4});
    const std::vector<std::vector<gf::Symbol>> shown = {
        {0, 0, 0, 0, h1, 0, 0, 0},  {g1, 0, 0, 0, h1, 0, 0, 0}, {0, 0, g4, 0, h1, 0, 0, 0},
        {0, g1, 0, 0, h1, 0, 0, 0}, {0, 0, 0, g4, h1, 0, 0, 0},
    };
    os << "\nquery set for (i,j)=(1,1), h1=" << h1 << ", g1=" << g1 << ", g4=" << g4 << " over F_7:\n";
    bool same = true;
    for (std::size_t n = 0; n < plan.constructed.size(); ++n) {
        os << "  v" << n + 1 << " = " << gf::to_string(plan.constructed[n].coefficients) << '\n';
        same = same && std::vector<gf::Symbol>(plan.constructed[n].coefficients.values().begin(),
                                               plan.constructed[n].coefficients.values().end()) == shown[n];
    }
    expect(same, "v1..v5 match the expected layout");

    const auto store = server::MessageStore::random(params, seed);
    std::vector<scheme::AnswerShare> answers;
    for (const auto& q : plan.queries) {
        answers.push_back(server::answer(store, q));
    }
    const gf::PrimeField F(params.q);
    // X_{a,1} = (Y_2 - Y_1) / g1 by hand
    bool by_hand = true;
    const auto xa1 = store.subpacket(1, 1);
    for (std::size_t s = 0; s < xa1.size(); ++s) {
        by_hand = by_hand && F.mul(F.sub(answers[1].symbols[s], answers[0].symbols[s]), F.inv(g1)) == xa1[s];
    }
    expect(by_hand, "X_{a,1} = (Y2 - Y1)/g1");
    const auto decoded = scheme::decode(plan, answers);
    expect(decoded.size() == 2 && decoded[0] == store.message(1) && decoded[1] == store.message(2),
           "decode recovers X_a and X_b");

    const auto rows = enumerate_answer_types(params);
    os << "\nanswer-set types:\n" << render_answer_types(rows);
    std::size_t nonzero = 0, fifteenth = 0, two_fifteenths = 0;
    Rational total = 0;
    for (const auto& r : rows) {
        if (r.zero_class) {
            continue;
        }
        ++nonzero;
        fifteenth += r.probability == Rational(1, 15);
        two_fifteenths += r.probability == Rational(2, 15);
        total += r.probability;
    }
    expect(nonzero == 11 && fifteenth == 7 && two_fifteenths == 4 && total == 1,
           "11 answer-set types: 7 at 1/15, 4 at 2/15, total 1");

    const auto dist = audit::exact_support_distribution(table, demand);
    auto at = [&](std::vector<unsigned> s) {
        auto it = dist.find(audit::SupportDescriptor::of(s));
        return it == dist.end() ? Rational(0) : it->second;
    };
    os << "\nsupport probabilities seen by one server (W = {a,b}):\n";
    os << "  single subpacket of a: " << to_fraction_string(at({1})) << ", of c: " << to_fraction_string(at({3}))
       << '\n';
    os << "  pair a+b: " << to_fraction_string(at({1, 2})) << ", a+c: " << to_fraction_string(at({1, 3}))
       << ", c+d: " << to_fraction_string(at({3, 4})) << '\n';
    os << "  triple a+c+d: " << to_fraction_string(at({1, 3, 4})) << ", a+b+c: " << to_fraction_string(at({1, 2, 3}))
       << '\n';
    const Rational r475(4, 75), r875(8, 75);
    expect(at({1}) == r475 && at({3}) == r475, "single subpacket: 4/75 demand vs 4/75 interference");
    expect(at({1, 2}) == r475 && at({1, 3}) == r475 && at({3, 4}) == r475, "pairs all 4/75");
    expect(at({1, 3, 4}) == r875 && at({1, 2, 3}) == r875, "triples both 8/75");

    const Rational download = ratemath::expected_download_units(table);
    const Rational rate = ratemath::achievable_rate(params);
    os << "\nexpected download = " << to_fraction_string(download) << " message units, R = "
       << to_fraction_string(rate) << ", capacity = "
       << to_fraction_string(ratemath::capacity_upper_bound(4, 2, 5)) << '\n';
    expect(download == Rational(12, 5), "expected download 12/5");
    expect(rate == Rational(5, 6) && ratemath::capacity_upper_bound(4, 2, 5) == rate &&
               ratemath::capacity_divisible(4, 2, 5) == rate,
           "R = 5/6 = capacity");

    os << "verdict: " << (res.ok ? "PASS" : "FAIL") << '\n';
    res.text = os.str();
    return res;
}

} // namespace mpir::harness
