#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mlebound/report.hpp"

namespace mlebound {

struct ConfigValue {
    std::string text;
    int line = 0;
};

// Flat "key = value" lines under [model], [experiment] and [rate] headers.
// '#' starts a comment.
struct ExperimentConfig {
    std::string model = "normal";
    std::map<std::string, ConfigValue> model_params;
    std::vector<std::size_t> n_list;
    std::vector<std::string> h_ids;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::optional<double> epsilon;
    std::string out;
    bool conservative = false;
    std::string path = "auto";  // auto, corollary or engine
    double bound_scale = 1.0;   // multiplies every bound; only for exercising failure paths
    std::string source = "<config>";

    // [rate]: n = 10^(start + k step) up to stop, sigma^2 = sigma2 * n^sigma2_power
    double rate_log10_start = 4.0, rate_log10_stop = 6.0, rate_log10_step = 0.2;
    double rate_sigma2_power = 0.0;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

const std::vector<std::string>& registered_models();

struct ModelInstance {
    std::unique_ptr<Model> model;
    Vec theta0;
};
ModelInstance instantiate(const ExperimentConfig& cfg, std::size_t n);

// Test functions by id; "unit-norms" is a bound-only entry with every norm 1.
NormSet norms_for(const std::string& h_id, std::size_t d);

std::vector<BoundReport> cmd_bound(const ExperimentConfig& cfg);

struct VerifyRow {
    BoundReport bound;
    double bound_total = 0.0;
    McEstimate mc;
    bool dominated = false;
};
std::vector<VerifyRow> cmd_verify(const ExperimentConfig& cfg);
std::vector<CsvRow> verify_csv_rows(const std::vector<VerifyRow>& rows, bool conservative);

struct CertifyOutput {
    MseCertificate certificate;
    std::optional<BoundReport> distance;  // unit norms, admissible n only
};
CertifyOutput cmd_certify_beta(double alpha, double beta, std::uint64_t n);

struct RateOutput {
    std::vector<double> values;
    RateFit fit;
};
RateOutput cmd_rate(const ExperimentConfig& cfg);

struct LemmaSummary {
    std::size_t cases = 0, passed = 0;
    bool equality_case = false;
    std::size_t cube_pairs = 0, cube_passed = 0;
};
LemmaSummary cmd_lemma_check(std::size_t cases, std::size_t cube_pairs, std::uint64_t seed);

}  // namespace mlebound
