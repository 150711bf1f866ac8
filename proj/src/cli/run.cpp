#include "tunnelclock/cli.hpp"

#include "tunnelclock/attoclock.hpp"
#include "tunnelclock/errors.hpp"
#include "tunnelclock/husimi.hpp"
#include "tunnelclock/larmor.hpp"
#include "tunnelclock/parallel.hpp"
#include "tunnelclock/ppt.hpp"
#include "tunnelclock/sfa.hpp"
#include "tunnelclock/validation.hpp"
#include "tunnelclock/variational.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace tunnelclock::cli {

namespace {

using nlohmann::json;

// Reads keys from one config object; every value used (given or defaulted) is
// copied to `resolved`, and keys nobody asked for are rejected by finish().
class Section {
public:
    Section(json in, std::string name) : in_(std::move(in)), name_(std::move(name)) {}

    double num(const std::string& key, double def) {
        const double v = has(key) ? get<double>(key) : def;
        if (!std::isfinite(v)) throw ConfigError(where(key) + " must be finite");
        resolved[key] = v;
        return v;
    }
    double positive(const std::string& key, double def) {
        const double v = num(key, def);
        if (!(v > 0.0)) throw ConfigError(where(key) + " must be positive");
        return v;
    }
    std::size_t count(const std::string& key, std::size_t def, std::size_t min = 1) {
        const long long v = has(key) ? get<long long>(key) : (long long)def;
        if (v < (long long)min) throw ConfigError(where(key) + " must be >= " + std::to_string(min));
        resolved[key] = v;
        return std::size_t(v);
    }
    std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
        const std::string v = has(key) ? get<std::string>(key) : def;
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) throw ConfigError(where(key) + ": bad value '" + v + "'");
        resolved[key] = v;
        return v;
    }
    std::vector<double> list(const std::string& key, const std::vector<double>& def) {
        std::vector<double> v = has(key) ? get<std::vector<double>>(key) : def;
        for (double x : v)
            if (!std::isfinite(x)) throw ConfigError(where(key) + " must be finite");
        resolved[key] = v;
        return v;
    }
    std::optional<double> maybe(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const double v = get<double>(key);
        resolved[key] = v;
        return v;
    }
    void finish() const {
        for (auto it = in_.begin(); it != in_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError(where(it.key()) + " is not used by this scenario");
    }
    json resolved = json::object();

private:
    bool has(const std::string& key) {
        used_.insert(key);
        return in_.contains(key) && !in_.at(key).is_null();
    }
    template <class T>
    T get(const std::string& key) const {
        try {
            return in_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(where(key) + " has the wrong type");
        }
    }
    std::string where(const std::string& key) const { return name_ + "." + key; }
    json in_;
    std::string name_;
    std::set<std::string> used_;
};

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    void add(std::initializer_list<double> v) {
        std::vector<std::string> r;
        for (double x : v) r.push_back(num17(x));
        rows.push_back(std::move(r));
    }
};

struct Outcome {
    Table table;
    json diagnostics = json::object();
    int status = kExitOk;
};

struct Context {
    const RunConfig& cfg;
    Section model{json::object(), "model"};
    Section pulse{json::object(), "pulse"};
    Section grids{json::object(), "grids"};
    Section tol{json::object(), "tolerances"};
    unsigned threads = 1;
    TransformOptions transform{};
    LarmorOptions larmor{};
    ResonanceOptions resonance{};
    double variational_dv = 0.0;  // relative to ip
};

ModelParams resolve_model(Context& c) {
    const double ip = c.model.positive("ip", kHeliumIp);
    const auto field = c.model.maybe("field");
    const auto kappa = c.model.maybe("kappa");
    if (field && kappa) throw ConfigError("model: give exactly one of field and kappa");
    if (field) return derive_params(ip, *field);
    // Neither given: kappa = 3, recorded in the sidecar.
    const double k = kappa ? *kappa : c.model.num("kappa", 3.0);
    if (!(k > 0.0)) throw ConfigError("model.kappa must be positive");
    return params_from_kappa(ip, k);
}

json params_json(const ModelParams& p) {
    return {{"ip", p.ip}, {"field", p.field}, {"kappa_tilde", p.kappa_tilde}, {"kappa", p.kappa}, {"x0", p.x0}, {"tau_tilde", p.tau_tilde}};
}

void read_tolerances(Context& c) {
    c.transform.tol = c.tol.positive("transform_tol", 1e-7);
    c.transform.initial_window = c.tol.positive("transform_initial_window", 8.0);
    c.transform.max_window = c.tol.positive("transform_max_window", 1024.0);
    c.transform.max_panel = c.tol.positive("transform_max_panel", 0.25);
    c.transform.threads = c.threads;
    c.larmor.max_segment = c.tol.positive("larmor_max_segment", 0.05);
    c.larmor.transform = c.transform;
    c.resonance.search_radius = c.tol.positive("resonance_search_radius", 0.5);
    c.resonance.step_tol = c.tol.positive("resonance_step_tol", 1e-14);
    c.resonance.max_iterations = int(c.tol.count("resonance_max_iterations", 200));
    c.variational_dv = c.tol.positive("variational_dv", 1e-5);
}

// Tolerances fixed in the library, listed so the sidecar is complete.
json fixed_tolerances() {
    return {{"transform_inner_quad_abs", 1e-13},  {"transform_inner_quad_rel", 1e-10},
            {"attoclock_quad_abs", 1e-13},        {"attoclock_quad_rel", 1e-11},
            {"cubic_phase_ray_angle", -M_PI / 6}, {"cubic_phase_decay_cutoff", 45.0},
            {"matching_condition_floor", 1e-13},  {"variational_halving_tol", 0.01},
            {"ppt_newton_residual_rel", 1e-10},   {"husimi_support_widths", 6.0},
            {"offset_flat_ratio", 10.0}};
}

Outcome scenario_params(Context& c) {
    const ModelParams p = resolve_model(c);
    Outcome o;
    o.table.columns = {"name", "value"};
    auto row = [&](const char* n, double v) { o.table.rows.push_back({n, num17(v)}); };
    row("ip", p.ip);
    row("field", p.field);
    row("kappa_tilde", p.kappa_tilde);
    row("kappa", p.kappa);
    row("x0", p.x0);
    row("tau_tilde", p.tau_tilde);
    row("amplitude_A_exact", amplitude_A_exact(p));
    if (p.kappa >= 1.0) {
        row("amplitude_A", amplitude_A(p));
        const cd s = scaling_factor(p);
        row("re_sigma", s.real());
        row("im_sigma", s.imag());
    }
    return o;
}

Outcome scenario_wavefunction(Context& c) {
    const ModelParams p = resolve_model(c);
    const std::string space = c.grids.choice("space", "position", {"position", "momentum"});
    const bool pos = space == "position";
    const double lo = c.grids.num("min", pos ? -2.0 : -3.0), hi = c.grids.num("max", pos ? 6.0 : 5.0);
    const std::size_t n = c.grids.count("n", 401, 2);
    if (!(hi > lo)) throw ConfigError("grids: need max > min");
    const std::vector<double> g = linear_grid(lo, hi, n);
    Outcome o;
    if (pos) {
        TransformDiagnostics d;
        const std::vector<cd> v = psi_position_values(p, g, c.transform, &d);
        o.table.columns = {"xi", "re_psi", "im_psi", "re_psi_saddle", "im_psi_saddle"};
        for (std::size_t i = 0; i < n; ++i) {
            const cd s = p.kappa >= 1.0 ? psi_position_saddle(p, g[i]) : cd(NAN, NAN);
            o.table.add({g[i], v[i].real(), v[i].imag(), s.real(), s.imag()});
        }
        o.diagnostics = {{"transform_window", d.window}, {"transform_last_change", d.last_change}, {"transform_nodes", d.nodes}};
    } else {
        const ComplexGrid1D m = psi_momentum_grid(p, g, c.threads);
        o.table.columns = {"u", "re_psi", "im_psi", "re_psi_saddle", "im_psi_saddle"};
        for (std::size_t i = 0; i < n; ++i) {
            const cd s = p.kappa >= 1.0 ? psi_momentum_saddle(p, g[i]) : cd(NAN, NAN);
            o.table.add({g[i], m.values[i].real(), m.values[i].imag(), s.real(), s.imag()});
        }
    }
    return o;
}

Outcome scenario_husimi(Context& c) {
    const ModelParams p = resolve_model(c);
    const double w = c.grids.positive("width", default_husimi_width(p));
    const double xlo = c.grids.num("x_min_x0", 0.0), xhi = c.grids.num("x_max_x0", 6.0);
    const std::size_t nx = c.grids.count("nx", 61, 2);
    const double plo = c.grids.num("p_min", 0.0), phi = c.grids.num("p_max", 4.0);
    const std::size_t np = c.grids.count("np", 81, 2);
    const double h = c.grids.positive("xi_step", 0.01);
    const std::vector<double> xs = linear_grid(xlo * p.x0, xhi * p.x0, nx), ps = linear_grid(plo, phi, np);
    // psi grid covering every window with a margin of one window
    const double pad = 7.0 * w / p.x0;
    std::vector<double> xi;
    for (double v = xlo - pad; v <= xhi + pad + 1e-12; v += h) xi.push_back(v);
    const ComplexGrid1D psi = psi_position_grid(p, xi, c.transform);
    const PhaseSpaceGrid g = husimi_grid(psi, xs, ps, w, c.threads);
    Outcome o;
    o.table.columns = {"x", "p", "h"};
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < np; ++j) o.table.add({xs[i], ps[j], g.at(i, j)});
    const std::vector<double> r = husimi_ridge_refined(g);
    std::vector<double> cl;
    for (double x : xs) cl.push_back(classical_velocity(p, x));
    o.diagnostics = {{"ridge_p", r}, {"classical_v", cl}, {"width", w}};
    return o;
}

Outcome scenario_larmor(Context& c) {
    const ModelParams p = resolve_model(c);
    c.larmor.barrier_lo_xi = c.grids.num("barrier_lo_x0", 0.0);
    c.larmor.barrier_hi_xi = c.grids.num("barrier_hi_x0", 1.0);
    c.larmor.source = c.grids.choice("initial_state", "numeric", {"numeric", "saddle"}) == "numeric" ? InitialState::numeric
                                                                                                   : InitialState::saddle;
    const double xmax = c.grids.positive("x_max_x0", 3.0);
    const std::size_t n = c.grids.count("n", 61, 16);
    const TimeTrace t = larmor_time_trace(p, xmax * p.x0, n, c.larmor);
    Outcome o;
    o.table.columns = {"x", "re_tau", "im_tau"};
    for (std::size_t i = 0; i < n; ++i) o.table.add({t.positions[i], t.times[i].real(), t.times[i].imag()});
    const cd s = scaling_factor(p);
    o.diagnostics = {{"plateau_re", t.times.back().real()}, {"plateau_im", t.times.back().imag()},
                     {"sigma_re", s.real()}, {"sigma_im", s.imag()}};
    return o;
}

Outcome scenario_attoclock(Context& c) {
    const ModelParams p = resolve_model(c);
    const double umax = c.grids.positive("u_max", 10.0);
    const std::size_t n = c.grids.count("n", 201, 16);
    const AttoTrace t = attoclock_trace(p, umax, n, c.threads);
    Outcome o;
    o.table.columns = {"u", "xi", "tau_a"};
    for (std::size_t i = 0; i < n; ++i) o.table.add({t.u_values[i], t.xi_values[i], t.tau_a[i]});
    o.diagnostics = {{"tau_tilde", p.tau_tilde}, {"tau_a_exit", t.tau_a.front()}, {"tau_a_end", t.tau_a.back()}};
    return o;
}

Outcome scenario_variational(Context& c) {
    const double ip = c.model.positive("ip", kHeliumIp);
    const auto field = c.model.maybe("field");
    const auto kappa = c.model.maybe("kappa");
    if (field && kappa) throw ConfigError("model: give exactly one of field and kappa");
    std::vector<ModelParams> pts;
    if (field) pts.push_back(derive_params(ip, *field));
    else if (kappa) pts.push_back(params_from_kappa(ip, *kappa));
    else
        for (double F : c.grids.list("fields", {0.3, 0.45, 0.6, 0.75})) pts.push_back(derive_params(ip, F));
    const bool steinberg = c.grids.choice("steinberg", "yes", {"yes", "no"}) == "yes";
    Outcome o;
    o.table.columns = {"field", "kappa", "re_energy", "im_energy", "width", "tau_variational", "tau_variational_half", "tau_steinberg"};
    json res = json::array();
    for (const ModelParams& p : pts) {
        const Resonance r = find_resonance(p, c.resonance);
        const VariationalTime t = larmor_time_variational(p, r, c.variational_dv * p.ip);
        const double st = steinberg ? larmor_plateau(p, c.larmor).real() : NAN;
        o.table.add({p.field, p.kappa, r.energy.real(), r.energy.imag(), r.width, t.tau, t.tau_half, st});
        res.push_back({{"field", p.field}, {"residual", r.residual}, {"iterations", r.iterations}});
    }
    o.diagnostics = {{"resonances", res}};
    return o;
}

Outcome scenario_ppt(Context& c) {
    const double ip = c.model.positive("ip", kHeliumIp);
    const double a0 = c.pulse.positive("a0", std::sqrt(2.0 * ip));
    const double omega = c.pulse.positive("omega", 0.569);
    const Envelope env = c.pulse.choice("envelope", "cos4", {"cos4", "constant"}) == "cos4" ? Envelope::cos4 : Envelope::constant;
    const double cycles = c.pulse.positive("envelope_cycles", 1.0);
    const PulseParams pl = make_pulse(a0, omega, ip, env, cycles);
    const std::size_t np = c.grids.count("np", 100, 2);
    const std::size_t nt = c.grids.count("ntheta", 181, 3);
    if (nt % 2 == 0) throw ConfigError("grids.ntheta must be odd");
    const double plo = c.grids.positive("p_min_a0", 0.1), phi = c.grids.positive("p_max_a0", 3.0);
    const SpectrumGrid g = spectrum(pl, linear_grid(plo * a0, phi * a0, np), symmetric_angle_grid(nt), c.threads);
    Outcome o;
    o.table.columns = {"p", "theta", "weight"};
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nt; ++j) o.table.add({g.p_values[i], g.theta_values[j], g.weight(i, j)});
    std::size_t missing = 0;
    for (unsigned char m : g.missing) missing += m;
    o.diagnostics = {{"offset_angle", offset_angle(g)}, {"theta_step", g.theta_values[1] - g.theta_values[0]},
                     {"gamma", pl.gamma}, {"saddle_window", saddle_window(pl)}, {"missing_nodes", missing}};
    return o;
}

Outcome scenario_scattering(Context& c) {
    const double v0 = c.grids.positive("barrier_height", 1.0);
    const double k = c.grids.positive("k", 1.0);
    const std::vector<double> widths = c.grids.list("halfwidths", {0.25, 0.5, 1.0, 2.0, 4.0, 8.0});
    Outcome o;
    o.table.columns = {"halfwidth", "re_tau_weak", "im_tau_weak", "tau_variational", "re_tau_reflect", "im_tau_reflect",
                       "transmission", "unitarity_defect", "wronskian_t", "wronskian_r"};
    for (double a : widths) {
        const ScatteringResult s = scattering_equivalence(v0, a, k);
        o.table.add({a, s.tau_weak.real(), s.tau_weak.imag(), s.tau_variational, s.tau_reflect.real(), s.tau_reflect.imag(),
                     std::norm(s.T), s.unitarity_defect, s.wronskian_t, s.wronskian_r});
    }
    return o;
}

Outcome scenario_validate(Context& c) {
    std::vector<int> only;
    for (double v : c.grids.list("only", {})) only.push_back(int(v));
    Outcome o;
    o.table.columns = {"id", "name", "pass", "seconds", "budget", "detail"};
    bool all = true;
    for (const CriterionResult& r : run_validation(only, c.threads)) {
        o.table.rows.push_back({std::to_string(r.id), quoted(r.name), r.pass ? "1" : "0", num17(r.seconds), num17(r.budget), quoted(r.detail)});
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    o.status = all ? kExitOk : kExitValidationFailed;
    o.diagnostics = {{"all_pass", all}};
    return o;
}

Outcome dispatch(Context& c) {
    switch (c.cfg.scenario) {
    case Scenario::params: return scenario_params(c);
    case Scenario::wavefunction: return scenario_wavefunction(c);
    case Scenario::husimi: return scenario_husimi(c);
    case Scenario::larmor: return scenario_larmor(c);
    case Scenario::attoclock: return scenario_attoclock(c);
    case Scenario::variational: return scenario_variational(c);
    case Scenario::ppt_spectrum: return scenario_ppt(c);
    case Scenario::scattering_demo: return scenario_scattering(c);
    case Scenario::validate: return scenario_validate(c);
    }
    throw ConfigError("unhandled scenario");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

} // namespace

int run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    const fs::path csv = cfg.output_path.empty() ? fs::path(to_string(cfg.scenario) + ".csv") : fs::path(cfg.output_path);
    fs::path sidecar = csv;
    sidecar.replace_extension(".json");
    auto cleanup = [&] {
        std::error_code ec;
        fs::remove(csv, ec);
        fs::remove(sidecar, ec);
    };
    try {
        if (sidecar == csv) throw ConfigError("output path must not end in .json");
        Context c{cfg};
        c.model = Section(cfg.model, "model");
        c.pulse = Section(cfg.pulse, "pulse");
        c.grids = Section(cfg.grids, "grids");
        c.tol = Section(cfg.tolerances, "tolerances");
        c.threads = resolve_threads(cfg.threads);
        read_tolerances(c);
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = dispatch(c);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.model.finish();
        c.pulse.finish();
        c.grids.finish();
        c.tol.finish();

        std::string text;
        for (std::size_t i = 0; i < o.table.columns.size(); ++i) text += (i ? "," : "") + o.table.columns[i];
        text += "\n";
        for (const auto& r : o.table.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) text += (i ? "," : "") + r[i];
            text += "\n";
        }
        json side = {{"scenario", to_string(cfg.scenario)},
                     {"library_version", kVersion},
                     {"csv", csv.filename().string()},
                     {"columns", o.table.columns},
                     {"rows", o.table.rows.size()},
                     {"model", c.model.resolved},
                     {"pulse", c.pulse.resolved},
                     {"grids", c.grids.resolved},
                     {"tolerances", c.tol.resolved},
                     {"fixed_tolerances", fixed_tolerances()},
                     {"seed", cfg.seed},
                     {"threads_requested", cfg.threads},
                     {"threads", c.threads},
                     {"diagnostics", o.diagnostics},
                     {"runtime_seconds", secs}};
        if (cfg.scenario != Scenario::ppt_spectrum && cfg.scenario != Scenario::scattering_demo &&
            cfg.scenario != Scenario::validate && cfg.scenario != Scenario::variational) {
            // Re-derive the model for the record (already validated above).
            Context tmp{cfg};
            tmp.model = Section(cfg.model, "model");
            side["params"] = params_json(resolve_model(tmp));
        }
        write_text(csv, text);
        write_text(sidecar, side.dump(2) + "\n");
        std::cerr << "wrote " << csv.string() << " (" << o.table.rows.size() << " rows) and " << sidecar.string() << "\n";
        return o.status;
    } catch (const ConfigError& e) {
        cleanup();
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        cleanup();
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        // NonConvergence, ContourCrossing, IllConditioned, OverflowError and anything unexpected
        cleanup();
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace tunnelclock::cli
