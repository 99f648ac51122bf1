// Command-line front end: rates, gen, simulate, audit, table, example.

#include "mpir/audit.hpp"
#include "mpir/errors.hpp"
#include "mpir/harness.hpp"
#include "mpir/ratemath.hpp"
#include "mpir/server.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct ParamFlags {
    unsigned K = 0;
    unsigned D = 0;
    unsigned L = 1;
    std::optional<unsigned> N;
    unsigned q = 3;
    unsigned m = 0;

    void attach(CLI::App* app, bool field_flags, bool required = true)
    {
        auto* k = app->add_option("--K", K, "number of messages");
        auto* d = app->add_option("--D", D, "number of demanded messages");
        if (required) {
            k->required();
            d->required();
        }
        app->add_option("--L", L, "subpacketization degree")->capture_default_str();
        app->add_option("--N", N, "number of servers (must equal D*L+1)");
        if (field_flags) {
            app->add_option("--q", q, "field order (prime >= 3)")->capture_default_str();
            app->add_option("--m", m, "symbols per message (default L)");
        }
    }

    mpir::SchemeParams resolve() const
    {
        const auto p = mpir::SchemeParams::make(K, D, L, q, m);
        if (N && *N != p.N) {
            throw mpir::ParameterError("N must equal D*L+1 = " + std::to_string(p.N) + ", got " +
                                       std::to_string(*N));
        }
        return p;
    }
};

int cmd_rates(const ParamFlags& pf, bool json)
{
    const auto table = mpir::ratemath::compute_ptable(pf.resolve());
    if (json) {
        std::cout << mpir::harness::rates_json(table).dump(2) << '\n';
    } else {
        std::cout << mpir::harness::rates_text(table);
    }
    return 0;
}

int cmd_gen(const ParamFlags& pf, std::uint64_t seed, const std::string& out)
{
    const auto store = mpir::server::MessageStore::random(pf.resolve(), seed);
    mpir::server::write_store(out, store);
    std::cout << "wrote " << out << " (" << store.params().to_string() << ")\n";
    return 0;
}

int cmd_simulate(const ParamFlags& pf, const std::string& store_path, std::size_t trials, std::uint64_t seed,
                 bool json)
{
    const auto report = store_path.empty()
                            ? mpir::harness::empirical_rate(pf.resolve(), trials, seed)
                            : mpir::harness::empirical_rate(mpir::server::load_store(store_path, pf.D), trials, seed);
    const auto table = mpir::ratemath::compute_ptable(report.params);
    if (json) {
        std::cout << mpir::harness::rates_json(table, &report).dump(2) << '\n';
    } else {
        std::cout << mpir::harness::rates_text(table, &report);
    }
    return report.decode_failures == 0 ? 0 : kExitViolation;
}

int cmd_audit(const ParamFlags& pf, bool value_level, std::size_t trials, double alpha, std::uint64_t seed)
{
    if (value_level) {
        const auto report = mpir::audit::statistical_value_audit(pf.resolve(), trials, alpha, seed);
        std::cout << report.to_text();
        return report.pass ? 0 : kExitViolation;
    }
    const auto report = mpir::audit::audit_privacy(mpir::ratemath::compute_ptable(pf.resolve()));
    std::cout << report.to_text();
    return report.pass ? 0 : kExitViolation;
}

int cmd_table(const ParamFlags& pf, bool hide_zero)
{
    const auto rows = mpir::harness::enumerate_answer_types(pf.resolve());
    std::cout << mpir::harness::render_answer_types(rows, !hide_zero);
    return 0;
}

int cmd_example(std::uint64_t seed)
{
    const auto result = mpir::harness::run_walkthrough(seed);
    std::cout << result.text;
    return result.ok ? 0 : kExitViolation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multi-message private information retrieval toolkit"};
    app.require_subcommand(1);

    ParamFlags pf;
    bool json = false;
    bool value_level = false;
    bool hide_zero = false;
    std::uint64_t seed = 1;
    std::size_t trials = 0;
    double alpha = 0.001;
    std::string out;
    std::string store_path;

    auto* rates = app.add_subcommand("rates", "print the probability table, f, g, j*, rate and capacity bounds");
    pf.attach(rates, false);
    rates->add_flag("--json", json, "emit JSON");

    auto* gen = app.add_subcommand("gen", "write a random message store");
    pf.attach(gen, true);
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--out", out, "output path")->required();

    auto* simulate = app.add_subcommand("simulate", "run end-to-end trials and report the empirical rate");
    pf.attach(simulate, true, false);
    simulate->add_option("--store", store_path, "message store file (needs --D)");
    simulate->add_option("--trials", trials, "number of trials")->default_val(1000);
    simulate->add_option("--seed", seed)->capture_default_str();
    simulate->add_flag("--json", json, "emit JSON");

    auto* audit = app.add_subcommand("audit", "privacy audit (exact support level, or statistical value level)");
    pf.attach(audit, true);
    audit->add_flag("--value-level", value_level, "chi-square test on full query values");
    audit->add_option("--trials", trials, "trials per demand set (value level)")->default_val(100000);
    audit->add_option("--alpha", alpha, "significance level (value level)")->capture_default_str();
    audit->add_option("--seed", seed)->capture_default_str();

    auto* table = app.add_subcommand("table", "enumerate answer-set types");
    pf.attach(table, false);
    table->add_flag("--hide-zero", hide_zero, "omit classes with probability 0");

    auto* example = app.add_subcommand("example", "worked K=4, D=2, L=2 instance");
    example->add_option("--seed", seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*rates) {
            return cmd_rates(pf, json);
        }
        if (*gen) {
            return cmd_gen(pf, seed, out);
        }
        if (*simulate) {
            if (store_path.empty() && (pf.K == 0 || pf.D == 0)) {
                throw mpir::ParameterError("simulate needs --store or --K and --D");
            }
            if (!store_path.empty() && pf.D == 0) {
                throw mpir::ParameterError("simulate --store needs --D");
            }
            return cmd_simulate(pf, store_path, trials, seed, json);
        }
        if (*audit) {
            return cmd_audit(pf, value_level, trials, alpha, seed);
        }
        if (*table) {
            return cmd_table(pf, hide_zero);
        }
        if (*example) {
            return cmd_example(seed);
        }
    } catch (const mpir::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const mpir::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
    }
    return kExitUsage;
}
