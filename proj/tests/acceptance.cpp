// Acceptance runner: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include "tunnelclock/validation.hpp"

#include <cstdio>
#include <cstdlib>
#include <vector>

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& r : tunnelclock::run_validation(only)) {
        std::printf("%s  %2d  %-38s %7.2f s  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
