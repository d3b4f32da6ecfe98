#include "shadowlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace shadowlab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_key(const ConfigFile& file, const std::string& key, const std::string& why) {
    std::ostringstream os;
    os << "config key '" << key << "'";
    auto it = file.lines.find(key);
    if (it != file.lines.end()) os << " (line " << it->second << ")";
    os << ": " << why;
    throw ConfigError(os.str());
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "scenario",    "epsilon",     "a",           "b",          "mu",
        "jacobi_c",    "jacobi_offset", "ob_axis",   "lf_axis",    "conjugate_ob",
        "retro_branch", "theta0",     "t0",          "r0",         "k",
        "grid_n",      "n_starts",    "n_samples",   "T",          "dt",
        "loop_radius", "loop_points", "abs_tol",     "rel_tol",    "collision_guard",
        "energy_floor", "direct_tol", "newton_tol",  "seed",       "threads",
        "out_dir"};
    return keys;
}

}  // namespace

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        bad_key(*this, key, "expected a number, got '" + it->second + "'");
    }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        std::size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        bad_key(*this, key, "expected an integer, got '" + it->second + "'");
    }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_key(*this, key, "expected a boolean, got '" + it->second + "'");
}

std::vector<int> ConfigFile::get_int_list(const std::string& key, std::vector<int> fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::vector<int> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            bad_key(*this, key, "expected a comma-separated integer list");
        }
    }
    if (out.empty()) bad_key(*this, key, "empty list");
    return out;
}

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile file;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (file.values.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        file.values[key] = value;
        file.lines[key] = lineno;
    }
    return file;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config_text(const ConfigFile& file) {
    std::string out;
    for (const auto& [k, v] : file.values) out += k + "=" + v + "\n";
    return out;
}

ScenarioConfig make_scenario_config(const ConfigFile& file) {
    for (const auto& [k, v] : file.values)
        if (!known_keys().count(k)) bad_key(file, k, "unknown key");

    ScenarioConfig cfg;
    cfg.scenario = file.get("scenario", cfg.scenario);
    static const std::set<std::string> scenarios{"katok", "spheroid", "kepler", "rotating-kepler",
                                                 "scr3bp"};
    if (!scenarios.count(cfg.scenario))
        bad_key(file, "scenario",
                "must be one of katok, spheroid, kepler, rotating-kepler, scr3bp");

    cfg.epsilon = file.get_double("epsilon", cfg.epsilon);
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 1.0)) bad_key(file, "epsilon", "must lie in [0,1)");
    if (cfg.scenario == "katok" && cfg.epsilon == 0.0)
        cfg.warnings.push_back("epsilon = 0: degenerate, all shadows are the Hopf flow");

    cfg.a = file.get_double("a", cfg.a);
    cfg.b = file.get_double("b", cfg.b);
    if (cfg.scenario == "spheroid" && !(cfg.a > 0.0 && cfg.b > 0.0))
        bad_key(file, "a", "spheroid parameters must be positive");

    cfg.mu = file.get_double("mu", cfg.scenario == "rotating-kepler" ? 0.0 : cfg.mu);
    if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) bad_key(file, "mu", "must lie in [0,1]");
    if (cfg.scenario == "rotating-kepler" && cfg.mu != 0.0)
        bad_key(file, "mu", "rotating-kepler fixes mu = 0");

    if (file.has("jacobi_c")) cfg.jacobi_c = file.get_double("jacobi_c", 0.0);
    if (file.has("jacobi_offset")) {
        cfg.jacobi_offset = file.get_double("jacobi_offset", 0.0);
        if (!(*cfg.jacobi_offset > 0.0)) bad_key(file, "jacobi_offset", "must be positive");
    }
    if (cfg.scenario == "scr3bp" && !cfg.jacobi_c && !cfg.jacobi_offset)
        cfg.jacobi_offset = 0.05;

    const bool scr_family = cfg.scenario == "scr3bp" || cfg.scenario == "rotating-kepler";
    CoordinateFrame def = scr_family ? CoordinateFrame{2, 0, false} : CoordinateFrame{0, 2, false};
    if (cfg.scenario == "kepler") def = CoordinateFrame{0, 1, false};
    cfg.frame = def;
    if (file.has("ob_axis") || file.has("lf_axis") || file.has("conjugate_ob")) {
        cfg.frame.ob_axis = file.get_int("ob_axis", def.ob_axis);
        cfg.frame.lf_axis = file.get_int("lf_axis", def.lf_axis);
        cfg.frame.conjugate_ob = file.get_bool("conjugate_ob", def.conjugate_ob);
        cfg.frame_set = true;
        try {
            validate_frame(cfg.frame);
        } catch (const Error& e) {
            bad_key(file, "ob_axis", e.what());
        }
    }
    cfg.retro_branch = file.get_bool("retro_branch", cfg.retro_branch);

    cfg.theta0 = file.get_double("theta0", cfg.theta0);
    cfg.t0 = file.get_double("t0", cfg.t0);
    cfg.r0 = file.get_double("r0", cfg.r0);
    cfg.k_list = file.get_int_list("k", cfg.k_list);
    for (int k : cfg.k_list)
        if (k < 1) bad_key(file, "k", "entries must be >= 1");
    cfg.grid_n = file.get_int("grid_n", cfg.grid_n);
    if (cfg.grid_n < 2) bad_key(file, "grid_n", "must be >= 2");
    cfg.n_starts = file.get_int("n_starts", cfg.n_starts);
    cfg.n_samples = file.get_int("n_samples", cfg.n_samples);
    cfg.T = file.get_double("T", cfg.T);
    cfg.dt = file.get_double("dt", cfg.dt);
    cfg.loop_radius = file.get_double("loop_radius", cfg.loop_radius);
    cfg.loop_points = file.get_int("loop_points", cfg.loop_points);

    cfg.abs_tol = file.get_double("abs_tol", cfg.abs_tol);
    cfg.rel_tol = file.get_double("rel_tol", cfg.rel_tol);
    cfg.collision_guard = file.get_double("collision_guard", cfg.collision_guard);
    cfg.energy_floor = file.get_double("energy_floor", cfg.energy_floor);
    if (!(cfg.energy_floor < 0.0)) bad_key(file, "energy_floor", "must be negative");
    cfg.direct_tol = file.get_double("direct_tol", cfg.direct_tol);
    cfg.newton_tol = file.get_double("newton_tol", cfg.newton_tol);

    cfg.seed = static_cast<std::uint64_t>(file.get_double("seed", static_cast<double>(cfg.seed)));
    cfg.threads = file.get_int("threads", cfg.threads);
    cfg.out_dir = file.get("out_dir", cfg.out_dir);
    return cfg;
}

double resolve_jacobi_level(const ScenarioConfig& cfg) {
    if (cfg.scenario == "rotating-kepler") {
        // H(L1) -> -3/2 as mu -> 0+; the config fixes the absolute level.
        return cfg.jacobi_c.value_or(-1.8);
    }
    if (cfg.jacobi_offset) {
        double HL1 = lagrange_L1(cfg.mu).critical_value;
        double c = HL1 - *cfg.jacobi_offset;
        if (cfg.jacobi_c && std::abs(*cfg.jacobi_c - c) > 1e-12)
            throw ConfigError("jacobi_c and jacobi_offset disagree");
        return c;
    }
    if (cfg.jacobi_c) {
        if (cfg.mu > 0.0 && cfg.mu < 1.0) {
            double HL1 = lagrange_L1(cfg.mu).critical_value;
            if (!(*cfg.jacobi_c < HL1))
                throw ConfigError("jacobi_c must lie below the first critical value H(L1)");
        }
        return *cfg.jacobi_c;
    }
    throw ConfigError("scr3bp scenario needs jacobi_c or jacobi_offset");
}

std::unique_ptr<Scenario> build_scenario(const ScenarioConfig& cfg) {
    if (cfg.scenario == "katok") {
        return std::make_unique<KatokScenario>(KatokParams{cfg.epsilon}, cfg.frame);
    }
    if (cfg.scenario == "spheroid") {
        auto s = std::make_unique<SpheroidScenario>(SpheroidParams{cfg.a, cfg.b});
        s->conjugate_ob = cfg.frame_set && cfg.frame.conjugate_ob;
        return s;
    }
    if (cfg.scenario == "kepler") {
        return std::make_unique<KeplerScenario>(cfg.frame);
    }
    auto s = std::make_unique<Scr3bpScenario>();
    s->mu = cfg.scenario == "rotating-kepler" ? 0.0 : cfg.mu;
    s->jacobi_c = resolve_jacobi_level(cfg);
    s->chart.energy_floor = cfg.energy_floor;
    s->control.abs_tol = cfg.abs_tol;
    s->control.rel_tol = cfg.rel_tol;
    s->control.collision_guard = cfg.collision_guard;
    s->frame_ = cfg.frame;
    s->retro_branch = cfg.retro_branch;
    s->scenario_label = cfg.scenario;
    return s;
}

}  // namespace shadowlab
