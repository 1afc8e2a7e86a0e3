#pragma once

#include <stdexcept>
#include <string>

namespace prodmeas {

// Violated preconditions: domain mismatches, overlapping unions, unsupported
// tail combinations, covers that do not cover. CLI exit code 2.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// A value was requested that the supplied certificates cannot establish
// (oscillating products, missing convergence certificates). CLI exit code 3.
class inconclusive_error : public std::runtime_error {
public:
    explicit inconclusive_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed problem files. CLI exit code 4.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace prodmeas
