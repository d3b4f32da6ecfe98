#ifndef SHADOWLAB_CONFIG_HPP
#define SHADOWLAB_CONFIG_HPP

// Flat INI-style key=value scenario configuration.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/scenario.hpp"

namespace shadowlab {

/// Parsed flat key/value file. Keys are unique; '#' and ';' start comments.
struct ConfigFile {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;  // for diagnostics

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_file(const std::string& path);

/// Full scenario configuration for a run.
struct ScenarioConfig {
    std::string scenario = "katok";  // katok|spheroid|kepler|rotating-kepler|scr3bp
    double epsilon = (std::sqrt(5.0) - 1.0) / 20.0;
    double a = 1.0, b = 1.2;
    double mu = 1e-3;
    std::optional<double> jacobi_c;       // absolute Jacobi level
    std::optional<double> jacobi_offset;  // c = H(L1(mu)) - offset, offset > 0
    CoordinateFrame frame{0, 2, false};
    bool frame_set = false;
    bool retro_branch = false;

    double theta0 = 0.0;
    double t0 = 0.3;
    double r0 = 0.6;
    std::vector<int> k_list{1};
    int grid_n = 12;
    int n_starts = 100;
    int n_samples = 1000;
    double T = 10.0;
    double dt = 0.01;
    double loop_radius = 0.4;
    int loop_points = 64;

    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double collision_guard = kDefaultCollisionGuard;
    double energy_floor = -1e-3;
    double direct_tol = 1e-6;
    double newton_tol = 1e-6;

    std::uint64_t seed = 2024;
    int threads = 0;  // 0: hardware concurrency
    std::string out_dir = "out";

    std::vector<std::string> warnings;
};

/// Validates ranges and cross-field invariants; throws ConfigError with the
/// offending key (and line when available).
ScenarioConfig make_scenario_config(const ConfigFile& file);

/// The Jacobi level of a configured scr3bp-family scenario.
double resolve_jacobi_level(const ScenarioConfig& cfg);

/// Instantiate the configured scenario.
std::unique_ptr<Scenario> build_scenario(const ScenarioConfig& cfg);

/// Canonical "key=value\n" text of the configuration (sorted keys), used
/// for the manifest config hash.
std::string canonical_config_text(const ConfigFile& file);

}  // namespace shadowlab

#endif
