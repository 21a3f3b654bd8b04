#pragma once

// Acceptance gate shared by the standalone acceptance binary and the CLI's
// verify subcommand: ten independent checks, each returning one pass/fail line
// with a counterexample or measurement in the detail string.

#include <string>
#include <vector>

namespace dfrac {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double ms = 0.0;
};

// quick = reduced grids and sample counts (a few seconds); full = the complete
// sweep. Tolerances are identical in both modes and fixed at compile time.
std::vector<CriterionResult> run_acceptance(bool quick);

// "[PASS] #3 name  detail (12.3 ms)"
std::string format_criterion_line(const CriterionResult& c);

} // namespace dfrac
