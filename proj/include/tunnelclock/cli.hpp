#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tunnelclock::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Scenario { params, wavefunction, husimi, larmor, attoclock, variational, ppt_spectrum, scattering_demo, validate };

const std::vector<std::string>& scenario_names();
Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

/// Bad configuration: unknown keys, wrong types, conflicting flags. Exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Structured run description. `model`, `pulse`, `grids` and `tolerances` are JSON
/// objects; values missing there take scenario defaults, which run() records.
struct RunConfig {
    Scenario scenario = Scenario::params;
    nlohmann::json model = nlohmann::json::object();       // ip, field | kappa
    nlohmann::json pulse = nlohmann::json::object();       // a0, omega, envelope, envelope_cycles
    nlohmann::json grids = nlohmann::json::object();       // per-scenario keys
    nlohmann::json tolerances = nlohmann::json::object();
    std::string output_path;                               // CSV; sidecar is the same path with .json
    long long seed = 0;                                    // reserved, everything is deterministic
    unsigned threads = 0;                                  // 0: TUNNELCLOCK_THREADS or hardware
};

/// Reads a JSON config file into a RunConfig (scenario taken from the file if present).
RunConfig config_from_json(const nlohmann::json& j, std::optional<Scenario> scenario = std::nullopt);
RunConfig load_config_file(const std::string& path, std::optional<Scenario> scenario = std::nullopt);

/// Full command line: tunnelclock <scenario> [--config F] [--ip X] [--field X | --kappa X] [--out P] [--threads N].
/// Flags win over the file. Returns nullopt when only help was requested.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv);

/// Executes the scenario and writes CSV + JSON sidecar. Returns the exit status;
/// on failure no output files are left behind.
int run(const RunConfig& config);

} // namespace tunnelclock::cli
