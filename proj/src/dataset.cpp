#include "mlebound/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mlebound/errors.hpp"

namespace mlebound {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

double parse_cell(const std::string& s, const std::string& path, std::size_t line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw Error(ErrorKind::Io, path + ":" + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    Dataset d;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, path + ": empty file");
    d.columns = split_csv(line);
    d.dim_obs = d.columns.size();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv(line);
        if (cells.size() != d.dim_obs)
            throw Error(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": expected " +
                                           std::to_string(d.dim_obs) + " columns");
        for (auto& c : cells) d.values.push_back(parse_cell(c, path, lineno));
    }
    return d;
}

void write_dataset_csv(const std::string& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    for (std::size_t j = 0; j < d.dim_obs; ++j) {
        std::string name = j < d.columns.size() ? d.columns[j] : "x" + std::to_string(j + 1);
        out << (j ? "," : "") << name;
    }
    out << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto o = d.obs(i);
        for (std::size_t j = 0; j < d.dim_obs; ++j) out << (j ? "," : "") << o[j];
        out << "\n";
    }
}

Matrix read_matrix_csv(const std::string& path) {
    Dataset d = read_dataset_csv(path);
    Matrix m(d.size(), d.dim_obs);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.dim_obs; ++j) m(i, j) = d.obs(i)[j];
    return m;
}

}  // namespace mlebound
