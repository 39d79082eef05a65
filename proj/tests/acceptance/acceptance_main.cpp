#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "nsp/acceptance.hpp"

// Runs the acceptance criteria (all, or those named on the command line) and
// prints one PASS/FAIL line per criterion followed by its sub-checks.
int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
    if (ids.empty())
        for (int k = 1; k <= nsp::criterion_count; ++k) ids.push_back(k);
    int failed = 0;
    for (int id : ids) {
        const nsp::CriterionResult r = nsp::run_criterion(id);
        if (!r.passed) ++failed;
        fmt::print("[{}] criterion {}: {} ({:.1f} s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title, r.seconds);
        std::string line;
        for (char ch : r.detail + "\n") {
            if (ch != '\n') {
                line += ch;
                continue;
            }
            fmt::print("      {}\n", line);
            line.clear();
        }
        std::cout << std::flush;
    }
    fmt::print("{} of {} criteria passed\n", ids.size() - failed, ids.size());
    return failed == 0 ? 0 : 1;
}
