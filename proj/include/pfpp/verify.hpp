#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pfpp {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double max_err = 0.0;  // worst observed deviation (relative where sensible)
    double tol = 0.0;
    double seconds = 0.0;
    std::string detail;  // instance counts or the first failure description
};

struct VerifyOptions {
    bool quick = false;  // smaller instance counts and sample sizes
    uint64_t seed = 20260814;
};

// Runs the complete identity suite: determinant route agreement and algebraic
// properties, reduction/multiplicative/conditional kernel identities against
// brute-force oracles, sampler law checks, and kernel reference values.
// A check that throws is reported as failed with the diagnostic attached.
std::vector<CheckResult> run_verification(const VerifyOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace pfpp
