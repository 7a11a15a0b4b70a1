#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mlebound/cli.hpp"
#include "mlebound/errors.hpp"

using namespace mlebound;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::string out;
    bool conservative = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
    auto* opt = sub->add_option("--config", c.config, "experiment config file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "base seed");
    sub->add_option("--reps", c.reps, "Monte Carlo replicates");
    sub->add_option("--out", c.out, "output path (CSV); JSON goes next to it");
    sub->add_flag("--conservative", c.conservative, "add 3 standard errors to every estimated term");
}

ExperimentConfig configured(const Common& c) {
    ExperimentConfig cfg = load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.reps) cfg.reps = *c.reps;
    if (!c.out.empty()) cfg.out = c.out;
    cfg.conservative = cfg.conservative || c.conservative;
    return cfg;
}

// CSV to the out path (or stdout), JSON to <out>.json when an out path is set.
void emit(const std::string& out, const std::string& csv, const ojson& js) {
    if (out.empty()) {
        std::cout << csv;
        std::cerr << js.dump(2) << '\n';
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + out);
    f << csv;
    std::ofstream j(out + ".json", std::ios::binary);
    j << js.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normal-approximation bounds for multi-parameter MLEs"};
    app.require_subcommand(1);

    Common bound_c, verify_c, rate_c, lemma_c;
    auto* bound = app.add_subcommand("bound", "evaluate bounds over the config grid");
    add_common(bound, bound_c, true);
    auto* verify = app.add_subcommand("verify", "compare bounds with simulated distances");
    add_common(verify, verify_c, true);
    auto* rate = app.add_subcommand("rate", "log-log slope of the normal bound over an n grid");
    add_common(rate, rate_c, true);

    auto* certify = app.add_subcommand("certify-beta", "sample-size gate and MSE certificate for Beta(a,b)");
    double alpha = 2.0, beta = 3.0;
    std::uint64_t n = 1;
    std::string certify_out;
    certify->add_option("--alpha", alpha)->required();
    certify->add_option("--beta", beta)->required();
    certify->add_option("--n", n)->required();
    certify->add_option("--out", certify_out, "JSON output path");

    auto* lemma = app.add_subcommand("lemma-check", "randomized conditional-expectation and cube checks");
    add_common(lemma, lemma_c, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound) {
            const ExperimentConfig cfg = configured(bound_c);
            const auto reports = cmd_bound(cfg);
            std::ostringstream csv;
            std::vector<CsvRow> rows;
            ojson js = ojson::array();
            for (const auto& r : reports) {
                rows.push_back(csv_row(r, cfg.conservative));
                js.push_back(to_json(r));
            }
            write_csv(csv, rows);
            emit(cfg.out, csv.str(), js);
            return 0;
        }
        if (*verify) {
            const ExperimentConfig cfg = configured(verify_c);
            const auto rows = cmd_verify(cfg);
            std::ostringstream csv;
            write_csv(csv, verify_csv_rows(rows, cfg.conservative));
            ojson js = ojson::array();
            bool ok = true;
            for (const auto& r : rows) {
                ojson j;
                j["bound"] = to_json(r.bound);
                j["bound_total"] = r.bound_total;
                j["mc"] = to_json(r.mc);
                j["dominated"] = r.dominated;
                js.push_back(j);
                ok = ok && r.dominated;
            }
            emit(cfg.out, csv.str(), js);
            if (!ok) std::cerr << "dominance check failed\n";
            return ok ? 0 : 1;
        }
        if (*rate) {
            const ExperimentConfig cfg = configured(rate_c);
            const RateOutput r = cmd_rate(cfg);
            std::ostringstream csv;
            csv << "n,bound\n";
            for (std::size_t i = 0; i < r.values.size(); ++i)
                csv << format_double(r.fit.n_grid[i]) << ',' << format_double(r.values[i]) << '\n';
            ojson js = to_json(r.fit);
            js["values"] = r.values;
            emit(cfg.out, csv.str(), js);
            std::cerr << "slope " << format_double(r.fit.slope) << '\n';
            return 0;
        }
        if (*certify) {
            const CertifyOutput c = cmd_certify_beta(alpha, beta, n);
            ojson js;
            js["certificate"] = to_json(c.certificate);
            if (c.distance) js["distance_bound"] = to_json(*c.distance);
            if (certify_out.empty()) {
                std::cout << js.dump(2) << '\n';
            } else {
                std::ofstream f(certify_out, std::ios::binary);
                f << js.dump(2) << '\n';
            }
            return 0;
        }
        if (*lemma) {
            const std::uint64_t seed = lemma_c.seed.value_or(1);
            const std::size_t cases = lemma_c.reps.value_or(1000);
            const LemmaSummary s = cmd_lemma_check(cases, 100000, seed);
            std::cout << "conditional lemma: " << s.passed << "/" << s.cases << " random cases, equality case "
                      << (s.equality_case ? "ok" : "FAILED") << "\ncube inequality: " << s.cube_passed << "/"
                      << s.cube_pairs << " pairs\n";
            return s.passed == s.cases && s.equality_case && s.cube_passed == s.cube_pairs ? 0 : 1;
        }
    } catch (const GateFailedError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}
