#pragma once

#include <string>
#include <vector>

namespace tunnelclock {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;     // measured numbers behind the verdict
    double seconds = 0.0;
    double budget = 0.0;    // runtime limit, seconds; exceeding it fails the criterion
};

inline constexpr int kCriterionCount = 11;

/// Runs one acceptance criterion (1..11). Exceptions become a failed result.
CriterionResult run_criterion(int id, unsigned threads = 0);

/// All criteria in order, or only the listed ids.
std::vector<CriterionResult> run_validation(const std::vector<int>& only = {}, unsigned threads = 0);

} // namespace tunnelclock
