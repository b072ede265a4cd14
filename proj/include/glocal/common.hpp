#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace glocal {

using VertexId = std::uint32_t;
using EdgeCount = std::uint64_t;

/// Bad or inconsistent input: parse failures, ids out of range, size guards.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: eigensolver non-convergence, sweep budget exceeded.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace glocal
