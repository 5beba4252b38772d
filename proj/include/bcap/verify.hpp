#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bcap {

struct CheckResult {
    std::string name;
    double tolerance;
    double observed;
    bool pass;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed;
    std::vector<CheckResult> checks;

    bool pass() const;
    std::string to_json() const;
};

/// Known suites: gaussian-core, identity-optimal, feedforward, oracles, all.
std::vector<std::string> verify_suite_names();
bool is_verify_suite(const std::string& name);

SuiteReport run_verify_suite(const std::string& suite, std::uint64_t seed);

}  // namespace bcap
