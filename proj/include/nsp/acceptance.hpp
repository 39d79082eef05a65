#pragma once

#include <string>
#include <vector>

namespace nsp {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;  // one line per sub-check, "name: PASS|FAIL (values)"
    double seconds = 0.0;
};

inline constexpr int criterion_count = 9;

// Runs one acceptance criterion (1..criterion_count). Exceptions raised by the
// numerics count as a failure of that criterion.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids);

}  // namespace nsp
