#pragma once
// Oracle suites behind the `validate` subcommand.

#include <string>
#include <vector>

namespace nhring {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::vector<std::string> lines;  // one per check
};

SuiteResult validate_bloch();
SuiteResult validate_determinant();
SuiteResult validate_symmetry(unsigned seed = 7);
SuiteResult validate_bz_limit();

/// Dispatch by name (bloch, determinant, symmetry, bz-limit); throws on unknown names.
SuiteResult run_suite(const std::string& name);

} // namespace nhring
