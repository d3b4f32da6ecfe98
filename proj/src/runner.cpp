#include "shadowlab/runner.hpp"

#include <chrono>
#include <iostream>
#include <thread>

#include "shadowlab/io.hpp"
#include "shadowlab/poincare.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {

namespace {

struct TaskStatus {
    std::string name;
    std::string status;  // "ok" | "failed"
    std::string detail;
    int severity = kExitOk;
};

int severity_of(const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfigError;
    if (dynamic_cast<const ConstraintViolation*>(&e)) return kExitInvariantViolation;
    if (dynamic_cast<const SolvabilityFailure*>(&e)) return kExitInvariantViolation;
    return kExitComputationalFailure;
}

nlohmann::json frame_json(const CoordinateFrame& f) {
    return {{"ob_axis", f.ob_axis}, {"lf_axis", f.lf_axis}, {"conjugate_ob", f.conjugate_ob}};
}

nlohmann::json tomography_json(const Tomography& t) {
    return {{"theta0", t.theta0}, {"t0", t.t0}, {"r0", t.r0}, {"frame", frame_json(t.frame)}};
}

Tomography tomography_of(const ScenarioConfig& cfg) {
    Tomography tom;
    tom.theta0 = cfg.theta0;
    tom.t0 = cfg.t0;
    tom.r0 = cfg.r0;
    tom.frame = cfg.frame;
    validate(tom);
    return tom;
}

int effective_threads(const ScenarioConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string path_csv(const TransversePath& path) {
    CsvWriter csv({"t", "theta", "c_re", "c_im", "margin"});
    for (const auto& s : path.samples)
        csv.row({csv_cell(s.t), csv_cell(s.label.theta), csv_cell(s.label.c.real()),
                 csv_cell(s.label.c.imag()), csv_cell(s.margin)});
    return csv.text();
}

void task_shadow_check(const ScenarioConfig& cfg, ArtifactSink& sink,
                       std::vector<TaskStatus>& statuses) {
    auto scn = build_scenario(cfg);
    if (cfg.scenario == "katok") {
        KatokParams k{cfg.epsilon};
        nlohmann::json reports = nlohmann::json::array();
        for (int axis = 1; axis <= 3; ++axis) {
            TaskStatus st{"shadow-check:i=" + std::to_string(axis), "ok", "", kExitOk};
            try {
                ConjugacyGrid grid;
                grid.n_starts = cfg.n_starts;
                grid.n_times = cfg.n_samples;
                grid.T = cfg.T;
                grid.seed = cfg.seed;
                ConjugacyReport rep = conjugacy_residual(k, axis, grid);
                reports.push_back({{"scenario", cfg.scenario},
                                   {"axis", axis},
                                   {"frame", frame_json(rep.frame)},
                                   {"spheroid", {{"a", rep.spheroid.a}, {"b", rep.spheroid.b}}},
                                   {"max_residual", rep.max_residual},
                                   {"sample_count", rep.sample_count},
                                   {"grid", {{"n_starts", grid.n_starts},
                                             {"n_times", grid.n_times},
                                             {"T", grid.T},
                                             {"seed", grid.seed}}}});
                st.detail = "max_residual " + format_double(rep.max_residual);
            } catch (const Error& e) {
                st.status = "failed";
                st.detail = e.what();
                st.severity = severity_of(e);
            }
            statuses.push_back(st);
        }
        sink.emit("conjugacy_report.json", reports.dump(2) + "\n");
    }
    // a sample transverse path through the configured tomography center
    TaskStatus st{"shadow-check:path", "ok", "", kExitOk};
    try {
        Tomography tom = tomography_of(cfg);
        ModelPoint start = scn->section_point(cd(0.25 * tom.r0, 0.1 * tom.r0), tom);
        TransversePath path = shadow_path(*scn, start, cfg.T, cfg.dt);
        sink.emit("shadow_path.csv", path_csv(path));
        nlohmann::json pj{{"scenario", cfg.scenario},
                          {"samples", path.samples.size()},
                          {"min_margin", path.min_margin},
                          {"transversality_ok", path.transversality_ok}};
        sink.emit("shadow_path.json", pj.dump(2) + "\n");
    } catch (const Error& e) {
        st.status = "failed";
        st.detail = e.what();
        st.severity = severity_of(e);
    }
    statuses.push_back(st);
}

void task_return_map(const ScenarioConfig& cfg, ArtifactSink& sink,
                     std::vector<TaskStatus>& statuses) {
    auto scn = build_scenario(cfg);
    Tomography tom = tomography_of(cfg);
    for (int k : cfg.k_list) {
        TaskStatus st{"return-map:k=" + std::to_string(k), "ok", "", kExitOk};
        try {
            CsvWriter csv({"c_re", "c_im", "f_re", "f_im", "d_re", "d_im", "d_abs"});
            const double R = tom.r0 * 0.95;
            for (int iy = 0; iy < cfg.grid_n; ++iy) {
                for (int ix = 0; ix < cfg.grid_n; ++ix) {
                    cd c(-R + 2.0 * R * ix / (cfg.grid_n - 1), -R + 2.0 * R * iy / (cfg.grid_n - 1));
                    if (std::abs(c) > R) continue;
                    cd f = return_map(c, k, tom, *scn);
                    cd d = f - c;
                    csv.row({csv_cell(c.real()), csv_cell(c.imag()), csv_cell(f.real()),
                             csv_cell(f.imag()), csv_cell(d.real()), csv_cell(d.imag()),
                             csv_cell(std::abs(d))});
                }
            }
            sink.emit("return_map_k" + std::to_string(k) + ".csv", csv.text());
            st.detail = std::to_string(csv.rows()) + " grid points";
        } catch (const Error& e) {
            st.status = "failed";
            st.detail = e.what();
            st.severity = severity_of(e);
        }
        statuses.push_back(st);
    }
}

void task_recurrence(const ScenarioConfig& cfg, ArtifactSink& sink,
                     std::vector<TaskStatus>& statuses) {
    auto scn = build_scenario(cfg);
    Tomography tom = tomography_of(cfg);
    nlohmann::json all_certs = nlohmann::json::array();
    for (int k : cfg.k_list) {
        TaskStatus st{"recurrence:k=" + std::to_string(k), "ok", "", kExitOk};
        try {
            RecurrenceOptions opts;
            opts.direct_tol = cfg.direct_tol;
            opts.newton_tol = cfg.newton_tol;
            opts.threads = effective_threads(cfg);
            RecurrenceScan scan = find_recurrent_points(tom, k, *scn, cfg.grid_n, opts);

            CsvWriter csv({"c_re", "c_im", "status", "residual", "d_re", "d_im", "aux_rotation"});
            for (const auto& n : scan.nodes) {
                std::string status = n.status == NodeStatus::DirectRecurrent ? "direct"
                                     : n.status == NodeStatus::LabelMismatch ? "mismatch"
                                     : n.status == NodeStatus::TransversalityLoss
                                         ? "transversality"
                                         : "failed";
                csv.row({csv_cell(n.c.real()), csv_cell(n.c.imag()), status,
                         csv_cell(n.residual), csv_cell(n.displacement.real()),
                         csv_cell(n.displacement.imag()),
                         n.aux_rotation ? csv_cell(*n.aux_rotation) : std::string("")});
            }
            sink.emit("recurrence_grid_k" + std::to_string(k) + ".csv", csv.text());

            std::string scen_hash =
                fnv1a_hex(cfg.scenario + "/" + format_double(cfg.mu) + "/" + format_double(cfg.epsilon));
            for (const auto& cert : scan.certificates) {
                all_certs.push_back({{"c_star_re", cert.c_star.real()},
                                     {"c_star_im", cert.c_star.imag()},
                                     {"k", cert.k},
                                     {"winding", cert.winding},
                                     {"residual", cert.residual},
                                     {"tomography", tomography_json(cert.tomography)},
                                     {"scenario_hash", scen_hash}});
            }
            st.detail = std::to_string(scan.certificates.size()) + " certificates";
        } catch (const Error& e) {
            st.status = "failed";
            st.detail = e.what();
            st.severity = severity_of(e);
        }
        statuses.push_back(st);
    }
    sink.emit("certificates.json", all_certs.dump(2) + "\n");
}

void task_census(const ScenarioConfig& cfg, ArtifactSink& sink,
                 std::vector<TaskStatus>& statuses) {
    TaskStatus st{"census", "ok", "", kExitOk};
    try {
        CensusResult res = periodic_census(KatokParams{cfg.epsilon}, std::max(cfg.T, 2.5));
        nlohmann::json orbits = nlohmann::json::array();
        for (const auto& orb : res.orbits) {
            nlohmann::json rep = nlohmann::json::array();
            for (int j = 0; j < 4; ++j)
                rep.push_back({{"re", orb.representative[j].real()},
                               {"im", orb.representative[j].imag()}});
            orbits.push_back(
                {{"period", orb.period}, {"support", orb.support}, {"representative", rep}});
        }
        nlohmann::json out{{"epsilon", cfg.epsilon},
                           {"resonant", res.resonant},
                           {"note", res.note},
                           {"orbit_count", res.orbits.size()},
                           {"orbits", orbits}};
        sink.emit("census.json", out.dump(2) + "\n");
        st.detail = res.resonant ? "resonant" : std::to_string(res.orbits.size()) + " orbits";
    } catch (const Error& e) {
        st.status = "failed";
        st.detail = e.what();
        st.severity = severity_of(e);
    }
    statuses.push_back(st);
}

void task_l1(const ScenarioConfig& cfg, ArtifactSink& sink, std::vector<TaskStatus>& statuses) {
    TaskStatus st{"l1", "ok", "", kExitOk};
    try {
        LagrangePoint L = lagrange_L1(cfg.mu);
        nlohmann::json out{{"mu", cfg.mu}, {"x", L.x}, {"critical_value", L.critical_value}};
        sink.emit("l1.json", out.dump(2) + "\n");
        st.detail = "x " + format_double(L.x);
    } catch (const Error& e) {
        st.status = "failed";
        st.detail = e.what();
        st.severity = severity_of(e);
    }
    statuses.push_back(st);
}

void task_area_check(const ScenarioConfig& cfg, ArtifactSink& sink,
                     std::vector<TaskStatus>& statuses) {
    auto scn = build_scenario(cfg);
    Tomography tom = tomography_of(cfg);
    nlohmann::json out = nlohmann::json::array();
    for (int k : cfg.k_list) {
        TaskStatus st{"area-check:k=" + std::to_string(k), "ok", "", kExitOk};
        try {
            std::vector<cd> loop;
            for (int j = 0; j < cfg.loop_points; ++j)
                loop.push_back(std::polar(cfg.loop_radius, 2.0 * M_PI * j / cfg.loop_points));
            double ratio = area_ratio(loop, k, tom, *scn);
            out.push_back({{"k", k},
                           {"loop_radius", cfg.loop_radius},
                           {"loop_points", cfg.loop_points},
                           {"area_ratio", ratio},
                           {"deviation", std::abs(ratio - 1.0)}});
            st.detail = "ratio " + format_double(ratio);
        } catch (const Error& e) {
            st.status = "failed";
            st.detail = e.what();
            st.severity = severity_of(e);
        }
        statuses.push_back(st);
    }
    sink.emit("area_check.json", out.dump(2) + "\n");
}

}  // namespace

int run(const std::string& subcommand, const ConfigFile& raw, const ScenarioConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    ArtifactSink sink(cfg.out_dir);
    std::vector<TaskStatus> statuses;

    for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

    if (subcommand == "shadow-check")
        task_shadow_check(cfg, sink, statuses);
    else if (subcommand == "return-map")
        task_return_map(cfg, sink, statuses);
    else if (subcommand == "recurrence") {
        if (cfg.scenario == "scr3bp" && !cfg.jacobi_offset && !cfg.jacobi_c)
            throw ConfigError("scr3bp recurrence needs jacobi_offset (> 0) or jacobi_c");
        task_recurrence(cfg, sink, statuses);
    } else if (subcommand == "census")
        task_census(cfg, sink, statuses);
    else if (subcommand == "l1")
        task_l1(cfg, sink, statuses);
    else if (subcommand == "area-check")
        task_area_check(cfg, sink, statuses);
    else
        throw ConfigError("unknown subcommand '" + subcommand + "'");

    int exit_code = kExitOk;
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& st : statuses) {
        tasks.push_back({{"name", st.name}, {"status", st.status}, {"detail", st.detail}});
        exit_code = std::max(exit_code, st.severity);
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    nlohmann::json manifest{{"config_hash", fnv1a_hex(canonical_config_text(raw))},
                            {"version", kVersion},
                            {"subcommand", subcommand},
                            {"wall_time_s", wall},
                            {"seed", cfg.seed},
                            {"threads", effective_threads(cfg)},
                            {"tasks", tasks},
                            {"warnings", cfg.warnings}};
    sink.write_manifest(manifest);

    for (const auto& st : statuses)
        if (st.status != "ok")
            std::cerr << "task " << st.name << " failed: " << st.detail << "\n";
    return exit_code;
}

}  // namespace shadowlab
