#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "mlebound/bounds_general.hpp"
#include "mlebound/harness.hpp"
#include "mlebound/implicit_mle.hpp"

namespace mlebound {

using ojson = nlohmann::ordered_json;

// %.17g; non-finite values print as nan/inf.
std::string format_double(double v);

ojson to_json(const BoundReport& r);
ojson to_json(const MseCertificate& c);
ojson to_json(const RateFit& r);
ojson to_json(const McEstimate& e);
MseCertificate certificate_from_json(const ojson& j);

struct CsvRow {
    std::string model;
    std::size_t n = 0;
    std::string h_id;
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, tail = 0.0, total = 0.0;
    std::optional<McEstimate> mc;  // empty for bound-only rows
    std::optional<bool> dominated;
};

const std::string& csv_header();
CsvRow csv_row(const BoundReport& r, bool conservative);
void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);

}  // namespace mlebound
