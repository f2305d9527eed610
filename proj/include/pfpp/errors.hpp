#pragma once

#include <stdexcept>
#include <string>

namespace pfpp {

// Structural problem with an input: bad shape, bad JSON schema, out-of-domain
// argument. Maps to CLI exit code 2.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical precondition failed: singular resolvent, zero intensity at a Palm
// point, sign-tracking path through zero, probability outside the clamping
// band. Maps to CLI exit code 3.
class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pfpp
