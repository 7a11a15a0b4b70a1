#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlebound/symmat.hpp"

namespace mlebound {

struct Dataset {
    std::size_t dim_obs = 1;
    std::vector<double> values;  // row-major, n rows of dim_obs
    std::uint64_t seed = 0;
    std::vector<std::string> columns;

    std::size_t size() const { return dim_obs == 0 ? 0 : values.size() / dim_obs; }
    std::span<const double> obs(std::size_t i) const {
        return {values.data() + i * dim_obs, dim_obs};
    }
};

// One observation per row, header row with column names.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& d);
Matrix read_matrix_csv(const std::string& path);

}  // namespace mlebound
