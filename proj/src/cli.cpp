#include "mlebound/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mlebound/beta_model.hpp"
#include "mlebound/bounds_closed.hpp"
#include "mlebound/errors.hpp"
#include "mlebound/normal_model.hpp"
#include "mlebound/regression_model.hpp"

namespace mlebound {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw Error(ErrorKind::Config, source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, const std::string& source, int line, const std::string& key) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v)) fail(source, line, key + ": not a number: '" + s + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& source, int line, const std::string& key) {
    // accepts 10000 and 1e4
    const double v = parse_double(s, source, line, key);
    if (v < 0.0 || v != std::floor(v) || v > 1.8e19) fail(source, line, key + ": not a nonnegative integer: '" + s + "'");
    std::uint64_t u = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), u);
    if (ec == std::errc() && p == s.data() + s.size()) return u;
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& s, const std::string& source, int line, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(source, line, key + ": expected true or false, got '" + s + "'");
}

double param(const ExperimentConfig& cfg, const std::string& key, double fallback) {
    auto it = cfg.model_params.find(key);
    if (it == cfg.model_params.end()) return fallback;
    return parse_double(it->second.text, cfg.source, it->second.line, key);
}

Vec param_list(const ExperimentConfig& cfg, const std::string& key, const Vec& fallback) {
    auto it = cfg.model_params.find(key);
    if (it == cfg.model_params.end()) return fallback;
    Vec out;
    for (const auto& s : split_list(it->second.text)) out.push_back(parse_double(s, cfg.source, it->second.line, key));
    if (out.empty()) fail(cfg.source, it->second.line, key + ": empty list");
    return out;
}

const std::vector<std::string>& known_params(const std::string& model) {
    static const std::map<std::string, std::vector<std::string>> m = {
        {"normal", {"mu", "sigma2"}},
        {"straight-line", {"x", "sigma2", "intercept", "slope"}},
        {"linear-regression", {"design", "sigma2", "theta"}},
        {"beta", {"alpha", "beta"}},
    };
    return m.at(model);
}

std::string resolved_path(const ExperimentConfig& cfg) {
    if (cfg.path != "auto") return cfg.path;
    return cfg.model == "linear-regression" ? "engine" : "corollary";
}

McConfig mc_of(const ExperimentConfig& cfg) {
    McConfig mc;
    mc.reps = cfg.reps;
    mc.seed = cfg.seed;
    return mc;
}

BoundReport scaled(BoundReport r, double f) {
    if (f == 1.0) return r;
    r.total = 0.0;
    auto terms = std::move(r.terms);
    r.terms.clear();
    for (auto& t : terms) {
        t.contribution *= f;
        t.stderr *= f;
        r.add(t);
    }
    return r;
}

BoundReport bound_for(const ExperimentConfig& cfg, const ModelInstance& mi, std::size_t n, const std::string& h_id) {
    const NormSet nm = norms_for(h_id, mi.model->dim_param());
    const std::string path = resolved_path(cfg);
    BoundReport r;
    if (path == "corollary") {
        if (cfg.model == "normal") {
            r = normal_report(n, mi.theta0[0], mi.theta0[1], nm, h_id);
        } else if (cfg.model == "straight-line") {
            const auto& lm = static_cast<const LinearRegressionModel&>(*mi.model);
            Vec x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = lm.design()(i, 1);
            r = straightline_report(x, nm, h_id);
            r.theta0 = mi.theta0;
        } else if (cfg.model == "beta") {
            r = beta_distance_bound(mi.theta0[0], mi.theta0[1], n, nm, h_id);
        } else {
            throw Error(ErrorKind::Config, cfg.model + " has no corollary bound; use path = engine");
        }
    } else {
        if (cfg.model == "beta") {
            const double eps = resolve_epsilon(*mi.model, mi.theta0, cfg.epsilon);
            r = implicit_distance_bound(*mi.model, mi.theta0, n, nm, h_id, *mi.model->support_radius(), eps, mc_of(cfg));
        } else {
            const double eps = resolve_epsilon(*mi.model, mi.theta0, cfg.epsilon);
            r = assemble(*mi.model, mi.theta0, n, eps, nm, h_id, mc_of(cfg));
        }
    }
    return scaled(std::move(r), cfg.bound_scale);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
    ExperimentConfig cfg;
    cfg.source = source;
    std::istringstream is(text);
    std::string raw, section;
    int line = 0;
    bool have_model_id = false;
    std::map<std::string, ConfigValue> model_raw;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(source, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "experiment" && section != "rate")
                fail(source, line, "unknown section [" + section + "]; expected [model], [experiment] or [rate]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(source, line, "expected key = value");
        const std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
        if (key.empty()) fail(source, line, "empty key");
        if (section.empty()) fail(source, line, "key '" + key + "' outside any section");
        if (section == "model") {
            if (key == "id") {
                cfg.model = val;
                have_model_id = true;
            } else {
                model_raw[key] = {val, line};
            }
        } else if (section == "experiment") {
            if (key == "n") {
                cfg.n_list.clear();
                for (const auto& v : split_list(val)) cfg.n_list.push_back(parse_uint(v, source, line, key));
            } else if (key == "h") {
                cfg.h_ids = split_list(val);
            } else if (key == "reps") {
                cfg.reps = parse_uint(val, source, line, key);
            } else if (key == "seed") {
                cfg.seed = parse_uint(val, source, line, key);
            } else if (key == "epsilon") {
                cfg.epsilon = parse_double(val, source, line, key);
            } else if (key == "out") {
                cfg.out = val;
            } else if (key == "conservative") {
                cfg.conservative = parse_bool(val, source, line, key);
            } else if (key == "path") {
                if (val != "auto" && val != "corollary" && val != "engine")
                    fail(source, line, "path: expected auto, corollary or engine");
                cfg.path = val;
            } else if (key == "bound_scale") {
                cfg.bound_scale = parse_double(val, source, line, key);
            } else {
                fail(source, line, "unknown key '" + key + "' in [experiment]");
            }
        } else {
            double* target = key == "log10_start"    ? &cfg.rate_log10_start
                             : key == "log10_stop"   ? &cfg.rate_log10_stop
                             : key == "log10_step"   ? &cfg.rate_log10_step
                             : key == "sigma2_power" ? &cfg.rate_sigma2_power
                                                     : nullptr;
            if (!target) fail(source, line, "unknown key '" + key + "' in [rate]");
            *target = parse_double(val, source, line, key);
        }
    }
    const auto& models = registered_models();
    if (std::find(models.begin(), models.end(), cfg.model) == models.end()) {
        std::string list;
        for (const auto& m : models) list += (list.empty() ? "" : ", ") + m;
        throw Error(ErrorKind::Config, source + ": unknown model '" + cfg.model + "'; registered: " + list);
    }
    (void)have_model_id;
    const auto& known = known_params(cfg.model);
    for (const auto& [k, v] : model_raw)
        if (std::find(known.begin(), known.end(), k) == known.end())
            fail(source, v.line, "unknown parameter '" + k + "' for model " + cfg.model);
    cfg.model_params = std::move(model_raw);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::Io, "cannot open config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.n_list.empty()) throw Error(ErrorKind::Config, cfg.source + ": n list is empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] == 0) throw Error(ErrorKind::Config, cfg.source + ": n must be positive");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
            throw Error(ErrorKind::Config, cfg.source + ": n list must be strictly ascending");
    }
    if (cfg.reps < 100) throw Error(ErrorKind::Config, cfg.source + ": reps must be at least 100");
    if (cfg.h_ids.empty()) throw Error(ErrorKind::Config, cfg.source + ": no test functions given");
    if (cfg.epsilon && !(*cfg.epsilon > 0.0)) throw Error(ErrorKind::Config, cfg.source + ": epsilon must be positive");
}

const std::vector<std::string>& registered_models() {
    static const std::vector<std::string> m = {"normal", "straight-line", "linear-regression", "beta"};
    return m;
}

ModelInstance instantiate(const ExperimentConfig& cfg, std::size_t n) {
    ModelInstance mi;
    if (cfg.model == "normal") {
        mi.model = std::make_unique<NormalModel>();
        mi.theta0 = {param(cfg, "mu", 0.0), param(cfg, "sigma2", 1.0)};
        if (!(mi.theta0[1] > 0.0)) throw Error(ErrorKind::Config, cfg.source + ": sigma2 must be positive");
    } else if (cfg.model == "straight-line") {
        const Vec x = param_list(cfg, "x", {-3.0, -1.0, 1.0, 3.0});
        mi.model = std::make_unique<LinearRegressionModel>(
            LinearRegressionModel::straight_line(LinearRegressionModel::tile(x, n), param(cfg, "sigma2", 1.0)));
        mi.theta0 = {param(cfg, "intercept", 1.0), param(cfg, "slope", 0.5)};
    } else if (cfg.model == "linear-regression") {
        auto it = cfg.model_params.find("design");
        if (it == cfg.model_params.end()) throw Error(ErrorKind::Config, cfg.source + ": linear-regression needs design");
        const Matrix pattern = read_matrix_csv(it->second.text);
        Matrix X(n, pattern.cols());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < pattern.cols(); ++j) X(i, j) = pattern(i % pattern.rows(), j);
        mi.model = std::make_unique<LinearRegressionModel>(std::move(X), param(cfg, "sigma2", 1.0));
        mi.theta0 = param_list(cfg, "theta", Vec(pattern.cols(), 0.0));
        if (mi.theta0.size() != pattern.cols())
            throw Error(ErrorKind::Config, cfg.source + ": theta length does not match design columns");
    } else {
        mi.model = std::make_unique<BetaModel>();
        mi.theta0 = {param(cfg, "alpha", 2.0), param(cfg, "beta", 3.0)};
        if (!(mi.theta0[0] > 0.0 && mi.theta0[1] > 0.0))
            throw Error(ErrorKind::Config, cfg.source + ": Beta shapes must be positive");
    }
    return mi;
}

NormSet norms_for(const std::string& h_id, std::size_t d) {
    if (h_id == "unit-norms") return {1.0, 1.0, 1.0, 1.0};
    return find_test_function(h_id, d).norms;
}

std::vector<BoundReport> cmd_bound(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<BoundReport> out;
    for (std::size_t n : cfg.n_list) {
        const ModelInstance mi = instantiate(cfg, n);
        for (const auto& h : cfg.h_ids) out.push_back(bound_for(cfg, mi, n, h));
    }
    return out;
}

std::vector<VerifyRow> cmd_verify(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<VerifyRow> out;
    for (std::size_t n : cfg.n_list) {
        const ModelInstance mi = instantiate(cfg, n);
        std::vector<TestFunction> hs;
        for (const auto& id : cfg.h_ids) {
            if (id == "unit-norms") throw Error(ErrorKind::Config, "unit-norms has no evaluable test function");
            hs.push_back(find_test_function(id, mi.model->dim_param()));
        }
        const std::vector<McEstimate> est = estimate_distances(*mi.model, mi.theta0, n, hs, cfg.reps, cfg.seed);
        for (std::size_t q = 0; q < hs.size(); ++q) {
            VerifyRow row;
            row.bound = bound_for(cfg, mi, n, hs[q].id);
            row.bound_total = cfg.conservative ? row.bound.conservative_total() : row.bound.total;
            row.mc = est[q];
            row.dominated = check_dominance(row.bound_total, est[q], 3.0);
            out.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<CsvRow> verify_csv_rows(const std::vector<VerifyRow>& rows, bool conservative) {
    std::vector<CsvRow> out;
    for (const auto& r : rows) {
        CsvRow c = csv_row(r.bound, conservative);
        c.mc = r.mc;
        c.dominated = r.dominated;
        out.push_back(c);
    }
    return out;
}

CertifyOutput cmd_certify_beta(double alpha, double beta, std::uint64_t n) {
    CertifyOutput out;
    out.certificate = certify_beta(alpha, beta, n);
    if (out.certificate.admissible) out.distance = beta_distance_bound(alpha, beta, n, {1.0, 1.0, 1.0, 1.0}, "unit-norms");
    return out;
}

RateOutput cmd_rate(const ExperimentConfig& cfg) {
    if (cfg.model != "normal") throw Error(ErrorKind::Config, "rate runs use the normal closed-form bound");
    if (!(cfg.rate_log10_step > 0.0) || cfg.rate_log10_stop < cfg.rate_log10_start)
        throw Error(ErrorKind::Config, cfg.source + ": bad [rate] grid");
    const double c = param(cfg, "sigma2", 1.0);
    const NormSet nm = norms_for(cfg.h_ids.empty() ? "unit-norms" : cfg.h_ids.front(), 2);
    RateOutput out;
    std::vector<double> grid;
    const long k_max = std::lround(std::floor((cfg.rate_log10_stop - cfg.rate_log10_start) / cfg.rate_log10_step + 1e-9));
    for (long k = 0; k <= k_max; ++k) {
        const double n = std::pow(10.0, cfg.rate_log10_start + static_cast<double>(k) * cfg.rate_log10_step);
        grid.push_back(n);
        out.values.push_back(bound_normal(n, c * std::pow(n, cfg.rate_sigma2_power), nm));
    }
    out.fit = fit_rate(grid, out.values);
    return out;
}

LemmaSummary cmd_lemma_check(std::size_t cases, std::size_t cube_pairs, std::uint64_t seed) {
    LemmaSummary s;
    for (std::size_t c = 0; c < cases; ++c) {
        SplitMix64 rng(stream_key(seed, c));
        const std::size_t d = 1 + rng.next() % 3;
        const double eps = 0.3 + 1.7 * rng.uniform();
        FinitePmf pmf;
        std::function<double(const Vec&)> f;
        if (c % 2 == 0) {
            // product pmf, f increasing in each coordinate
            std::vector<Vec> vals(d), probs(d);
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t k = 1 + rng.next() % 4;
                vals[i].push_back(eps * rng.uniform());  // keeps the event nonempty
                probs[i].push_back(rng.uniform());
                for (std::size_t a = 1; a < k; ++a) {
                    vals[i].push_back(2.0 * rng.uniform() + 1e-3);
                    probs[i].push_back(rng.uniform());
                }
            }
            std::vector<std::size_t> idx(d, 0);
            while (true) {
                Vec atom(d);
                double p = 1.0;
                for (std::size_t i = 0; i < d; ++i) {
                    atom[i] = vals[i][idx[i]];
                    p *= probs[i][idx[i]];
                }
                pmf.atoms.push_back(atom);
                pmf.probs.push_back(p);
                std::size_t i = 0;
                while (i < d && ++idx[i] == vals[i].size()) idx[i++] = 0;
                if (i == d) break;
            }
            Vec w(d), t(d), lin(d);
            for (std::size_t i = 0; i < d; ++i) {
                w[i] = rng.uniform();
                t[i] = 2.0 * rng.uniform();
                lin[i] = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
            }
            f = [w, t, lin](const Vec& m) {
                double v = 0.0;
                for (std::size_t i = 0; i < m.size(); ++i) v += w[i] * (m[i] >= t[i] ? 1.0 : 0.0) + lin[i] * m[i];
                return v;
            };
        } else {
            // arbitrary pmf, f a nondecreasing step function of the largest coordinate
            const std::size_t k = 1 + rng.next() % 8;
            for (std::size_t a = 0; a < k; ++a) {
                Vec atom(d);
                for (double& v : atom) v = a == 0 ? eps * rng.uniform() : 2.0 * rng.uniform() + 1e-3;
                pmf.atoms.push_back(atom);
                pmf.probs.push_back(rng.uniform());
            }
            Vec steps(3), jumps(3);
            for (std::size_t q = 0; q < 3; ++q) {
                steps[q] = 2.0 * rng.uniform();
                jumps[q] = rng.uniform();
            }
            f = [steps, jumps](const Vec& m) {
                const double mx = *std::max_element(m.begin(), m.end());
                double v = 0.0;
                for (std::size_t q = 0; q < steps.size(); ++q) v += mx >= steps[q] ? jumps[q] : 0.0;
                return v;
            };
        }
        ++s.cases;
        if (lemma_conditional_check(pmf, f, eps)) ++s.passed;
    }
    {
        FinitePmf pmf{{{0.5, 0.5}, {1.5, 0.5}, {0.5, 1.5}, {1.5, 1.5}}, {0.1, 0.2, 0.3, 0.4}};
        auto f = [](const Vec&) { return 2.5; };
        s.equality_case = lemma_conditional_check(pmf, f, 1.0);
    }
    SplitMix64 rng(stream_key(seed, 0xc0be));
    for (std::size_t i = 0; i < cube_pairs; ++i) {
        // heavy-ish tails: both signs, scales over several decades
        const double a = rng.normal() * std::exp(3.0 * rng.normal());
        const double b = rng.normal() * std::exp(3.0 * rng.normal());
        const double lhs = std::pow(std::fabs(a) + std::fabs(b), 3);
        const double rhs = 4.0 * (std::pow(std::fabs(a), 3) + std::pow(std::fabs(b), 3));
        ++s.cube_pairs;
        if (lhs <= rhs * (1.0 + 1e-12)) ++s.cube_passed;
    }
    return s;
}

}  // namespace mlebound
