#pragma once

#include <cstdint>
#include <string>

#include "cannonball/errors.hpp"

namespace cannonball {

struct RunConfig {
    std::string cache_path;
    std::uint64_t memory_budget_bytes = std::uint64_t(2) << 30;  // 2 GiB
    unsigned worker_count = 1;
    enum class Format { csv, json } output_format = Format::csv;
    unsigned precision_bits = 96;

    void validate() const {
        if (worker_count < 1) throw ParameterError("RunConfig: worker_count must be >= 1");
        if (precision_bits < 16 || precision_bits > 256)
            throw ParameterError("RunConfig: precision_bits must be in [16, 256]");
    }
};

}  // namespace cannonball
