#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "blfctl/scenarios.hpp"

namespace blfctl {

using json = nlohmann::json;

namespace detail {

inline Vec3 to_vec3(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(key + " must be an array of 3 numbers");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline VecN<2> to_vec2(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(key + " must be an array of 2 numbers");
    return VecN<2>(j[0].get<double>(), j[1].get<double>());
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void maybe_vec3(const json& j, const char* key, Vec3& out) {
    if (j.contains(key)) out = to_vec3(j.at(key), key);
}

inline void maybe_vec2(const json& j, const char* key, VecN<2>& out) {
    if (j.contains(key)) out = to_vec2(j.at(key), key);
}

}  // namespace detail

inline json load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ConfigError("failed to parse " + path + ": " + e.what());
    }
    return j;
}

/// Apply the optional override sections of a config document onto an
/// assembled quadrotor run. Unknown keys in known sections are ignored;
/// values are type-checked.
inline void apply_overrides(QuadRunSetup& run, const json& cfg) {
    using detail::maybe;
    using detail::maybe_vec3;
    if (cfg.contains("sim")) {
        const json& s = cfg.at("sim");
        maybe(s, "dt", run.dt);
        maybe(s, "horizon", run.horizon);
        if (s.contains("integrator")) {
            const auto v = s.at("integrator").get<std::string>();
            if (v == "rk4")
                run.integrator = Integrator::rk4;
            else if (v == "euler")
                run.integrator = Integrator::euler;
            else
                throw ConfigError("sim.integrator must be rk4 or euler");
        }
    }
    if (cfg.contains("constraints")) {
        const json& c = cfg.at("constraints");
        maybe_vec3(c, "k_p", run.constraints.k_p);
        maybe_vec3(c, "k_q", run.constraints.k_q);
        maybe_vec3(c, "kdot_p", run.constraints.kdot_p);
        maybe_vec3(c, "kdot_q", run.constraints.kdot_q);
    }
    if (cfg.contains("gains")) {
        const json& g = cfg.at("gains");
        maybe_vec3(g, "lambda_1p", run.gains.lambda_1p);
        maybe_vec3(g, "lambda_2p", run.gains.lambda_2p);
        maybe_vec3(g, "lambda_1q", run.gains.lambda_1q);
        maybe_vec3(g, "lambda_2q", run.gains.lambda_2q);
        maybe(g, "eps_p", run.gains.eps_p);
        maybe(g, "eps_q", run.gains.eps_q);
        maybe(g, "filter_tc", run.filter_tc);
    }
    if (cfg.contains("robust")) {
        const json& r = cfg.at("robust");
        maybe(r, "m_bar", run.robust.m_bar);
        maybe_vec3(r, "J_bar", run.robust.J_bar_diag);
        maybe(r, "E_p", run.robust.E_p);
        maybe(r, "E_q", run.robust.E_q);
        maybe_vec3(r, "d_p_bound", run.robust.d_p_bound);
        maybe_vec3(r, "d_q_bound", run.robust.d_q_bound);
    }
    if (cfg.contains("plant")) {
        const json& p = cfg.at("plant");
        maybe(p, "mass", run.plant.m);
        maybe_vec3(p, "J", run.plant.J_diag);
        maybe_vec3(p, "com_offset", run.plant.com_offset);
        maybe(p, "payload_mass", run.plant.payload_mass);
    }
    if (cfg.contains("init")) {
        const json& i = cfg.at("init");
        maybe_vec3(i, "p", run.init.p);
        maybe_vec3(i, "v", run.init.v);
        maybe_vec3(i, "q", run.init.q);
        maybe_vec3(i, "w", run.init.w);
    }
}

inline void apply_overrides(ElRunSetup& run, const json& cfg) {
    using detail::maybe;
    using detail::maybe_vec2;
    if (cfg.contains("sim")) {
        const json& s = cfg.at("sim");
        maybe(s, "dt", run.dt);
        maybe(s, "horizon", run.horizon);
        if (s.contains("control_update")) {
            const auto v = s.at("control_update").get<std::string>();
            if (v == "zoh")
                run.control_update = ControlUpdate::zoh;
            else if (v == "continuous")
                run.control_update = ControlUpdate::continuous;
            else
                throw ConfigError("sim.control_update must be zoh or continuous");
        }
        if (s.contains("integrator")) {
            const auto v = s.at("integrator").get<std::string>();
            run.integrator = v == "euler" ? Integrator::euler : Integrator::rk4;
        }
    }
    if (cfg.contains("gains")) {
        const json& g = cfg.at("gains");
        maybe_vec2(g, "K1", run.blf.gains.K1);
        maybe_vec2(g, "K2", run.blf.gains.K2);
    }
    if (cfg.contains("constraints")) {
        const json& c = cfg.at("constraints");
        maybe_vec2(c, "k_a", run.blf.k_a);
        maybe_vec2(c, "k_b", run.blf.k_b);
    }
    if (cfg.contains("el")) {
        detail::maybe(cfg.at("el"), "asym_gain_verbatim", run.blf.asym_gain_verbatim);
    }
    if (cfg.contains("pid")) {
        const json& p = cfg.at("pid");
        maybe_vec2(p, "Kp", run.pid.Kp);
        maybe_vec2(p, "Ki", run.pid.Ki);
        maybe_vec2(p, "Kd", run.pid.Kd);
        maybe(p, "integral_clamp", run.pid.integral_clamp);
    }
    if (cfg.contains("plant")) {
        const json& p = cfg.at("plant");
        maybe(p, "m1", run.plant.m1);
        maybe(p, "m2", run.plant.m2);
        maybe(p, "l1", run.plant.l1);
        maybe(p, "l2", run.plant.l2);
        maybe(p, "fv1", run.plant.fv1);
        maybe(p, "fv2", run.plant.fv2);
    }
    if (cfg.contains("init")) {
        const json& i = cfg.at("init");
        maybe_vec2(i, "q", run.init.q);
        maybe_vec2(i, "qdot", run.init.qdot);
    }
}

}  // namespace blfctl
