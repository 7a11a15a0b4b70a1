#include "mlebound/report.hpp"

#include <cmath>
#include <cstdio>

#include "mlebound/errors.hpp"

namespace mlebound {

namespace {

ojson num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ojson opt_num(const std::optional<double>& v) { return v ? num(*v) : ojson(nullptr); }

std::optional<double> read_opt(const ojson& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ojson to_json(const BoundReport& r) {
    ojson j;
    j["model"] = r.model_id;
    j["h_id"] = r.h_id;
    j["n"] = r.n;
    j["theta0"] = ojson::array();
    for (double v : r.theta0) j["theta0"].push_back(num(v));
    j["epsilon"] = num(r.epsilon);
    j["terms"] = ojson::array();
    for (const auto& t : r.terms) {
        ojson tj;
        tj["name"] = t.name;
        tj["group"] = t.group;
        tj["contribution"] = num(t.contribution);
        tj["stderr"] = num(t.stderr);
        tj["closed_form"] = t.closed_form;
        tj["reps"] = t.reps;
        tj["seed"] = t.seed;
        j["terms"].push_back(tj);
    }
    j["total"] = num(r.total);
    j["conservative_total"] = num(r.conservative_total());
    ojson ex = ojson::object();
    for (const auto& [k, v] : r.extras) ex[k] = num(v);
    j["extras"] = ex;
    return j;
}

ojson to_json(const MseCertificate& c) {
    ojson j;
    j["model"] = c.model_id;
    j["theta0"] = c.theta0;
    j["n"] = c.n;
    j["s"] = num(c.s);
    j["epsilon"] = num(c.epsilon);
    j["M"] = num(c.M);
    j["gamma"] = num(c.gamma);
    j["omega"] = num(c.omega);
    j["v"] = num(c.v);
    j["U1"] = opt_num(c.U1);
    j["mse_bound"] = opt_num(c.mse_bound);
    j["mse_bound_as_stated"] = opt_num(c.mse_bound_as_stated);
    j["gate_n_min"] = c.gate_n_min;
    j["admissible"] = c.admissible;
    return j;
}

MseCertificate certificate_from_json(const ojson& j) {
    try {
        MseCertificate c;
        c.model_id = j.at("model").get<std::string>();
        c.theta0 = j.at("theta0").get<Vec>();
        c.n = j.at("n").get<std::uint64_t>();
        c.s = j.at("s").get<double>();
        c.epsilon = j.at("epsilon").get<double>();
        c.M = j.at("M").get<double>();
        c.gamma = j.at("gamma").get<double>();
        c.omega = j.at("omega").get<double>();
        c.v = j.at("v").get<double>();
        c.U1 = read_opt(j, "U1");
        c.mse_bound = read_opt(j, "mse_bound");
        c.mse_bound_as_stated = read_opt(j, "mse_bound_as_stated");
        c.gate_n_min = j.at("gate_n_min").get<std::uint64_t>();
        c.admissible = j.at("admissible").get<bool>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, std::string("bad certificate JSON: ") + e.what());
    }
}

ojson to_json(const RateFit& r) {
    ojson j;
    j["n_grid"] = r.n_grid;
    j["slope"] = num(r.slope);
    j["intercept"] = num(r.intercept);
    j["residual_rms"] = num(r.residual_rms);
    return j;
}

ojson to_json(const McEstimate& e) {
    ojson j;
    j["value"] = num(e.value);
    j["stderr"] = num(e.stderr);
    j["reps"] = e.reps;
    j["seed"] = e.seed;
    j["rejected_replicates"] = e.rejected_replicates;
    return j;
}

const std::string& csv_header() {
    static const std::string h =
        "model,n,h_id,term_k1,term_k2,term_k3,term_tail,bound_total,mc_estimate,mc_stderr,reps,seed,dominated";
    return h;
}

CsvRow csv_row(const BoundReport& r, bool conservative) {
    CsvRow row;
    row.model = r.model_id;
    row.n = r.n;
    row.h_id = r.h_id;
    auto g = [&](const char* name) {
        double s = 0.0;
        for (const auto& t : r.terms)
            if (t.group == name) s += t.contribution + (conservative ? 3.0 * t.stderr : 0.0);
        return s;
    };
    row.k1 = g("k1");
    row.k2 = g("k2");
    row.k3 = g("k3");
    row.tail = g("tail");
    row.total = conservative ? r.conservative_total() : r.total;
    return row;
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << csv_header() << '\n';
    for (const auto& r : rows) {
        os << r.model << ',' << r.n << ',' << r.h_id << ',' << format_double(r.k1) << ',' << format_double(r.k2)
           << ',' << format_double(r.k3) << ',' << format_double(r.tail) << ',' << format_double(r.total) << ',';
        if (r.mc)
            os << format_double(r.mc->value) << ',' << format_double(r.mc->stderr) << ',' << r.mc->reps << ','
               << r.mc->seed;
        else
            os << ",,,";
        os << ',';
        if (r.dominated) os << (*r.dominated ? "true" : "false");
        os << '\n';
    }
}

}  // namespace mlebound
