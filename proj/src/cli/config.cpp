#include "tunnelclock/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace tunnelclock::cli {

namespace {
using nlohmann::json;

const std::vector<std::string> kNames = {"params", "wavefunction", "husimi", "larmor", "attoclock",
                                         "variational", "ppt_spectrum", "scattering_demo", "validate"};

json object_field(const json& j, const char* key) {
    if (!j.contains(key)) return json::object();
    if (!j.at(key).is_object()) throw ConfigError(std::string("config: '") + key + "' must be an object");
    return j.at(key);
}
} // namespace

const std::vector<std::string>& scenario_names() { return kNames; }

Scenario parse_scenario(const std::string& name) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return Scenario(i);
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string to_string(Scenario s) { return kNames.at(std::size_t(s)); }

RunConfig config_from_json(const json& j, std::optional<Scenario> scenario) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    static const std::vector<std::string> allowed = {"scenario", "model", "pulse", "grids", "tolerances",
                                                     "output_path", "seed", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("config: unknown key '" + it.key() + "'");
    RunConfig c;
    try {
        if (j.contains("scenario")) {
            const Scenario s = parse_scenario(j.at("scenario").get<std::string>());
            if (scenario && *scenario != s)
                throw ConfigError("config: file scenario '" + to_string(s) + "' differs from the command line");
            c.scenario = s;
        }
        else if (scenario)
            c.scenario = *scenario;
        else
            throw ConfigError("config: no scenario given in the file or on the command line");
        c.model = object_field(j, "model");
        c.pulse = object_field(j, "pulse");
        c.grids = object_field(j, "grids");
        c.tolerances = object_field(j, "tolerances");
        if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<long long>();
        if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config_file(const std::string& path, std::optional<Scenario> scenario) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        // Comments allowed, so configs can carry notes.
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return config_from_json(j, scenario);
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv) {
    CLI::App app{"tunnelclock: tunneling-time observables of a 1D static-field model"};
    std::string scenario, config, out;
    std::optional<double> ip, field, kappa;
    std::optional<unsigned> threads;
    app.add_option("scenario", scenario, "scenario to run (may come from --config instead)")->check(CLI::IsMember(kNames));
    app.add_option("--config", config, "JSON config file");
    app.add_option("--ip", ip, "ionization potential (a.u.)");
    auto* f = app.add_option("--field", field, "static field strength (a.u.)");
    auto* k = app.add_option("--kappa", kappa, "kappa = ip sqrt(2 ip) / F");
    f->excludes(k);
    app.add_option("--out", out, "output CSV path; the sidecar gets the .json extension");
    app.add_option("--threads", threads, "worker threads (0: TUNNELCLOCK_THREADS or hardware)");
    app.set_version_flag("--version", kVersion);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return std::nullopt;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    std::optional<Scenario> s;
    if (!scenario.empty()) s = parse_scenario(scenario);
    if (config.empty() && !s) throw ConfigError("a scenario is required (positional or in --config)");
    RunConfig c = config.empty() ? RunConfig{} : load_config_file(config, s);
    if (s) c.scenario = *s;
    if (ip) c.model["ip"] = *ip;
    // A flag replaces whichever of field/kappa the file set.
    if (field) {
        c.model.erase("kappa");
        c.model["field"] = *field;
    }
    if (kappa) {
        c.model.erase("field");
        c.model["kappa"] = *kappa;
    }
    if (!out.empty()) c.output_path = out;
    if (threads) c.threads = *threads;
    return c;
}

} // namespace tunnelclock::cli
