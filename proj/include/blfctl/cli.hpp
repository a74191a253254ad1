#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <vector>

#include "blfctl/config.hpp"
#include "blfctl/csv.hpp"
#include "blfctl/metrics.hpp"

namespace blfctl {

struct RunSpec {
    std::string scenario;
    std::string controller;
    std::string config_path;  // optional; falls back to $BLFCTL_CONFIG
    std::optional<uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::string out_dir = ".";
};

namespace detail {

inline QuadControllerKind quad_controller_by_id(const std::string& id) {
    if (id == "rsb") return QuadControllerKind::pos_att_blf;
    if (id == "full_state") return QuadControllerKind::full_state_blf;
    if (id == "smc") return QuadControllerKind::smc;
    throw ConfigError("unknown quadrotor controller: " + id);
}

inline ElControllerKind el_controller_by_id(const std::string& id) {
    if (id == "blf_sym") return ElControllerKind::blf_sym;
    if (id == "blf_asym") return ElControllerKind::blf_asym;
    if (id == "pid") return ElControllerKind::pid;
    throw ConfigError("unknown manipulator controller: " + id);
}

inline json resolve_config(const RunSpec& spec) {
    std::string path = spec.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("BLFCTL_CONFIG")) path = env;
    }
    if (path.empty()) return json::object();
    return load_config_file(path);
}

inline json metrics_to_json(const MetricsReport& m, const SimLog& log) {
    auto block = [&](const std::array<AxisStats, 3>& stats, int n) {
        json rms = json::array();
        json peak = json::array();
        for (int i = 0; i < n; ++i) {
            rms.push_back(stats[i].rms);
            peak.push_back(stats[i].peak);
        }
        return json{{"rms", rms}, {"peak", peak}};
    };
    json j;
    j["status"] = to_string(log.status);
    j["detail"] = log.detail;
    j["violations"] = m.violation_count;
    j["steps"] = log.records.size();
    if (m.dof == 2) {
        j["joint_error_rad"] = block(m.position, 2);
    } else {
        j["position_error_m"] = block(m.position, 3);
        j["attitude_error_deg"] = block(m.attitude, 3);
        j["velocity_error_mps"] = block(m.velocity, 3);
        j["rate_error_degps"] = block(m.rate, 3);
        if (!m.drop_errors.empty()) j["drop_error_m"] = m.drop_errors;
    }
    return j;
}

inline std::string summary_text(const std::string& scenario, const std::string& controller,
                                uint64_t seed, const MetricsReport& m, const SimLog& log) {
    std::ostringstream os;
    os << "scenario:    " << scenario << "\n";
    os << "controller:  " << controller << "\n";
    os << "seed:        " << seed << "\n";
    os << "status:      " << to_string(log.status) << "\n";
    if (!log.detail.empty()) os << "detail:      " << log.detail << "\n";
    os << "violations:  " << m.violation_count << "\n";
    os << "steps:       " << log.records.size() << "\n\n";
    auto block = [&](const char* title, const std::array<AxisStats, 3>& s, const char* names[],
                     int n) {
        os << title << "\n";
        for (int i = 0; i < n; ++i) {
            os << "  " << names[i] << "  rms " << s[i].rms << "  peak " << s[i].peak << "\n";
        }
    };
    if (m.dof == 2) {
        const char* joints[] = {"q1", "q2"};
        block("joint error (rad)", m.position, joints, 2);
    } else {
        const char* pos[] = {"x", "y", "z"};
        const char* att[] = {"phi", "theta", "psi"};
        block("position error (m)", m.position, pos, 3);
        block("attitude error (deg)", m.attitude, att, 3);
        block("velocity error (m/s)", m.velocity, pos, 3);
        block("attitude-rate error (deg/s)", m.rate, att, 3);
        if (!m.drop_errors.empty()) {
            os << "drop accuracy (m):";
            for (double d : m.drop_errors) os << " " << d;
            os << "\n";
        }
    }
    return os.str();
}

struct RunArtifacts {
    SimLog log;
    MetricsReport metrics;
    std::string scenario;
    std::string controller;
    uint64_t seed = 0;
};

inline RunArtifacts execute(const RunSpec& spec) {
    const json cfg = resolve_config(spec);
    uint64_t seed = 1;
    if (cfg.contains("sim") && cfg.at("sim").contains("seed"))
        seed = cfg.at("sim").at("seed").get<uint64_t>();
    if (spec.seed) seed = *spec.seed;

    RunArtifacts art;
    art.scenario = spec.scenario;
    art.controller = spec.controller;
    art.seed = seed;

    if (is_quad_scenario(spec.scenario)) {
        QuadRunSetup run = make_quad_run(spec.scenario, quad_controller_by_id(spec.controller),
                                         seed);
        apply_overrides(run, cfg);
        // overrides can change the commanded attitude at t = 0; re-align
        // unless the config pinned the initial attitude itself
        if (!(cfg.contains("init") && cfg.at("init").contains("q"))) align_initial_attitude(run);
        if (spec.dt) run.dt = *spec.dt;
        if (spec.horizon) run.horizon = *spec.horizon;
        art.log = run_quadrotor(run);
        art.metrics = compute_metrics(art.log, run.events);
    } else if (is_el_scenario(spec.scenario)) {
        ElRunSetup run =
            make_el_run(el_scenario_by_id(spec.scenario), el_controller_by_id(spec.controller));
        apply_overrides(run, cfg);
        if (spec.dt) run.dt = *spec.dt;
        if (spec.horizon) run.horizon = *spec.horizon;
        art.log = run_manipulator(run);
        art.metrics = compute_metrics(art.log);
    } else {
        throw ConfigError("unknown scenario: " + spec.scenario);
    }
    return art;
}

inline void write_artifacts(const std::filesystem::path& dir, const RunArtifacts& art) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "trajectory.csv", to_csv(art.log));
    write_file_atomic(dir / "metrics.json", metrics_to_json(art.metrics, art.log).dump(2) + "\n");
    write_file_atomic(dir / "summary.txt",
                      summary_text(art.scenario, art.controller, art.seed, art.metrics, art.log));
}

inline int exit_code_for(const SimLog& log) {
    if (log.status == TerminalStatus::numeric_failure) return 1;
    if (log.status == TerminalStatus::aborted_violation || log.violation_count() > 0) return 2;
    return 0;
}

}  // namespace detail

/// Run one scenario/controller pair and write trajectory.csv, metrics.json
/// and summary.txt into the output directory. Exit codes: 0 completed clean,
/// 2 when a constraint was violated (a reportable outcome, not a crash),
/// 1 on configuration or numeric errors.
inline int cmd_run(const RunSpec& spec) {
    try {
        const auto art = detail::execute(spec);
        detail::write_artifacts(spec.out_dir, art);
        return detail::exit_code_for(art.log);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

/// Run several controllers on the same scenario and emit a side-by-side
/// RMS/peak table (text and CSV), plus per-controller artifact directories.
/// A failed member run is annotated in the table instead of aborting the
/// comparison.
inline int cmd_compare(const RunSpec& base, const std::vector<std::string>& controllers) {
    if (controllers.size() < 2) {
        std::fprintf(stderr, "error: compare needs at least two controllers\n");
        return 1;
    }
    struct Entry {
        std::string controller;
        bool ok = false;
        std::string note;
        MetricsReport m;
        SimLog log;
    };
    std::vector<Entry> entries;
    int worst = 0;
    for (const auto& c : controllers) {
        RunSpec spec = base;
        spec.controller = c;
        Entry e;
        e.controller = c;
        try {
            auto art = detail::execute(spec);
            detail::write_artifacts(std::filesystem::path(base.out_dir) / c, art);
            e.ok = true;
            e.m = art.metrics;
            e.log = std::move(art.log);
            if (e.log.status != TerminalStatus::completed)
                e.note = std::string(to_string(e.log.status)) +
                         (e.log.detail.empty() ? "" : ": " + e.log.detail);
            worst = std::max(worst, detail::exit_code_for(e.log));
        } catch (const Error& err) {
            e.note = err.what();
            worst = 1;
        }
        entries.push_back(std::move(e));
    }

    const bool quad = is_quad_scenario(base.scenario);
    const bool full = quad && entries.size() && entries.front().log.full_state;
    std::ostringstream txt;
    std::string csv = "block,axis,stat";
    for (const auto& e : entries) csv += "," + e.controller;
    csv += "\n";

    txt << "scenario: " << base.scenario << "\n\n";
    for (const auto& e : entries)
        if (!e.note.empty()) txt << "note [" << e.controller << "]: " << e.note << "\n";
    txt << "\n";

    auto emit_block = [&](const char* blockname, const char* names[], int n,
                          std::array<AxisStats, 3> MetricsReport::* field) {
        for (int i = 0; i < n; ++i) {
            for (const char* stat : {"rms", "peak"}) {
                txt << blockname << " " << names[i] << " " << stat << ":";
                csv += std::string(blockname) + "," + names[i] + "," + stat;
                for (const auto& e : entries) {
                    if (!e.ok) {
                        txt << "  n/a";
                        csv += ",n/a";
                        continue;
                    }
                    const AxisStats& s = (e.m.*field)[i];
                    const double v = std::string(stat) == "rms" ? s.rms : s.peak;
                    txt << "  " << v;
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), ",%.17g", v);
                    csv += buf;
                }
                txt << "\n";
                csv += "\n";
            }
        }
    };

    if (quad) {
        const char* pos[] = {"x", "y", "z"};
        const char* att[] = {"phi", "theta", "psi"};
        emit_block("position(m)", pos, 3, &MetricsReport::position);
        emit_block("attitude(deg)", att, 3, &MetricsReport::attitude);
        if (full) {
            emit_block("velocity(m/s)", pos, 3, &MetricsReport::velocity);
            emit_block("rate(deg/s)", att, 3, &MetricsReport::rate);
        }
    } else {
        const char* joints[] = {"q1", "q2"};
        emit_block("joint(rad)", joints, 2, &MetricsReport::position);
    }
    txt << "\nviolations:";
    csv += "violations,,count";
    for (const auto& e : entries) {
        txt << "  " << (e.ok ? std::to_string(e.m.violation_count) : std::string("n/a"));
        csv += "," + (e.ok ? std::to_string(e.m.violation_count) : std::string("n/a"));
    }
    txt << "\n";
    csv += "\n";

    std::filesystem::create_directories(base.out_dir);
    write_file_atomic(std::filesystem::path(base.out_dir) / "comparison.txt", txt.str());
    write_file_atomic(std::filesystem::path(base.out_dir) / "comparison.csv", csv);
    return worst;
}

}  // namespace blfctl
