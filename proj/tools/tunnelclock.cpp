#include "tunnelclock/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace tunnelclock::cli;
    try {
        const auto cfg = parse_command_line(argc, argv);
        if (!cfg) return kExitOk;
        return run(*cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}
