#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cannonball {

// Error taxonomy mirrored by the CLI exit codes:
//   ParameterError -> usage (2), ResourceError -> resource (3),
//   FormatError -> data format (4).  Domain violations use std::domain_error.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t byte_offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::uint64_t offset;
};

}  // namespace cannonball
