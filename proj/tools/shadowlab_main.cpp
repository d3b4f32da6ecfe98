// shadowlab: scenario runner for the Reeb-flow shadow laboratory.
//
//   shadowlab <subcommand> [--config file] [key overrides] [--out dir]
//
// Subcommands: shadow-check, return-map, recurrence, census, l1, area-check.

#include <iostream>

#include <CLI11.hpp>

#include "shadowlab/io.hpp"
#include "shadowlab/runner.hpp"

using namespace shadowlab;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string scenario;
    std::vector<std::string> sets;  // key=value overrides
    std::optional<double> mu, epsilon, a, b, jacobi_c, jacobi_offset, theta0, t0, r0, T, dt;
    std::optional<int> grid_n, threads;
    std::optional<std::uint64_t> seed;
    std::vector<int> k_list;
};

void add_common(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "flat key=value configuration file");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "RNG seed for property suites");
    cmd->add_option("--threads", o.threads, "worker pool size (0: all logical processors)");
    cmd->add_option("--scenario", o.scenario, "katok|spheroid|kepler|rotating-kepler|scr3bp");
    cmd->add_option("--mu", o.mu, "mass ratio");
    cmd->add_option("--epsilon", o.epsilon, "Katok perturbation parameter");
    cmd->add_option("--a", o.a, "spheroid parameter a");
    cmd->add_option("--b", o.b, "spheroid parameter b");
    cmd->add_option("--jacobi-c", o.jacobi_c, "absolute Jacobi level");
    cmd->add_option("--jacobi-offset", o.jacobi_offset, "Jacobi level as H(L1) - offset");
    cmd->add_option("--theta0", o.theta0, "page angle of the tomography");
    cmd->add_option("--t0", o.t0, "tomography ob-modulus profile parameter");
    cmd->add_option("--r0", o.r0, "tomography base-disk radius");
    cmd->add_option("--T", o.T, "time horizon");
    cmd->add_option("--dt", o.dt, "sampling step");
    cmd->add_option("--grid-n", o.grid_n, "grid nodes per side");
    cmd->add_option("--k", o.k_list, "return indices (repeatable)");
    cmd->add_option("--set", o.sets, "raw key=value override (repeatable)");
}

ConfigFile merged_config(const CliOverrides& o) {
    ConfigFile file;
    if (!o.config_path.empty()) file = parse_config_file(o.config_path);
    auto put = [&file](const std::string& k, const std::string& v) { file.values[k] = v; };
    for (const std::string& kv : o.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        put(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.scenario.empty()) put("scenario", o.scenario);
    auto putd = [&](const char* k, const std::optional<double>& v) {
        if (v) put(k, format_double(*v));
    };
    putd("mu", o.mu);
    putd("epsilon", o.epsilon);
    putd("a", o.a);
    putd("b", o.b);
    putd("jacobi_c", o.jacobi_c);
    putd("jacobi_offset", o.jacobi_offset);
    putd("theta0", o.theta0);
    putd("t0", o.t0);
    putd("r0", o.r0);
    putd("T", o.T);
    putd("dt", o.dt);
    if (o.grid_n) put("grid_n", std::to_string(*o.grid_n));
    if (o.threads) put("threads", std::to_string(*o.threads));
    if (o.seed) put("seed", std::to_string(*o.seed));
    if (!o.k_list.empty()) {
        std::string ks;
        for (std::size_t i = 0; i < o.k_list.size(); ++i)
            ks += (i ? "," : "") + std::to_string(o.k_list[i]);
        put("k", ks);
    }
    if (!o.out_dir.empty()) put("out_dir", o.out_dir);
    return file;
}

}  // namespace


int main(int argc, char** argv) {
    CLI::App app{"shadowlab: Reeb-flow shadows, tomography return maps and recurrence detection"};
    app.require_subcommand(1);

    const std::vector<std::string> names{"shadow-check", "return-map", "recurrence",
                                         "census",       "l1",         "area-check"};
    std::map<std::string, CliOverrides> overrides;
    for (const auto& n : names) {
        auto* cmd = app.add_subcommand(n);
        add_common(cmd, overrides[n]);
    }

    CLI11_PARSE(app, argc, argv);

    std::string sub = app.get_subcommands().front()->get_name();
    try {
        ConfigFile raw = merged_config(overrides[sub]);
        ScenarioConfig cfg = make_scenario_config(raw);
        return run(sub, raw, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ConstraintViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariantViolation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputationalFailure;
    }
}
