#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "blfctl/el_blf.hpp"
#include "blfctl/plants.hpp"
#include "blfctl/quad_blf.hpp"
#include "blfctl/smc.hpp"

namespace blfctl {

enum class Integrator { rk4, euler };

/// zoh: control computed once per step and held (digital loop).
/// continuous: control re-evaluated inside every integrator stage; only
/// available for stateless control laws (the exact-model EL controllers).
enum class ControlUpdate { zoh, continuous };

enum class TerminalStatus { completed, aborted_violation, numeric_failure };

inline const char* to_string(TerminalStatus s) {
    switch (s) {
        case TerminalStatus::completed: return "completed";
        case TerminalStatus::aborted_violation: return "aborted_violation";
        case TerminalStatus::numeric_failure: return "numeric_failure";
    }
    return "?";
}

/// Classical fixed-step integrators over a fixed-size state.
template <int N, typename Deriv>
VecN<N> rk4_step(double t, const VecN<N>& x, double dt, Deriv&& f) {
    const VecN<N> k1 = f(t, x);
    const VecN<N> k2 = f(t + 0.5 * dt, VecN<N>(x + 0.5 * dt * k1));
    const VecN<N> k3 = f(t + 0.5 * dt, VecN<N>(x + 0.5 * dt * k2));
    const VecN<N> k4 = f(t + dt, VecN<N>(x + dt * k3));
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <int N, typename Deriv>
VecN<N> euler_step(double t, const VecN<N>& x, double dt, Deriv&& f) {
    return x + dt * f(t, x);
}

// ---------------------------------------------------------------------------
// Log
// ---------------------------------------------------------------------------

/// One record per control step. Quadrotor runs fill every field; manipulator
/// runs embed the two joints in the leading components of p/v and leave the
/// attitude blocks zero.
struct SimRecord {
    double t = 0.0;
    Vec3 p = Vec3::Zero(), v = Vec3::Zero(), q = Vec3::Zero(), w = Vec3::Zero();
    Vec3 p_d = Vec3::Zero(), pdot_d = Vec3::Zero(), q_d = Vec3::Zero(), qdot_d = Vec3::Zero();
    Vec3 z_p = Vec3::Zero(), z_2p = Vec3::Zero(), z_q = Vec3::Zero(), z_2q = Vec3::Zero();
    Vec3 zdot_p = Vec3::Zero(), zdot_q = Vec3::Zero();
    Vec3 tau_p = Vec3::Zero(), tau_q = Vec3::Zero();
    double u1 = 0.0;
    double rho_p = 0.0, rho_q = 0.0;
    double V = 0.0;
    Vec3 dist_p = Vec3::Zero(), dist_q = Vec3::Zero();
    Vec3 alpha_p = Vec3::Zero(), alphadot_p = Vec3::Zero();
    Vec3 alpha_q = Vec3::Zero(), alphadot_q = Vec3::Zero();
    double eta_p_norm = 0.0, eta_q_norm = 0.0;
    double mass = 0.0;
    bool violation = false;
};

struct SimLog {
    std::vector<SimRecord> records;
    TerminalStatus status = TerminalStatus::completed;
    std::string detail;       // violation or failure description
    int dof = 3;              // 2 for the manipulator family
    bool full_state = false;  // velocity/rate constraints active
    double dt = 0.0;

    int violation_count() const {
        return static_cast<int>(std::count_if(records.begin(), records.end(),
                                              [](const SimRecord& r) { return r.violation; }));
    }
};

// ---------------------------------------------------------------------------
// Quadrotor closed loop
// ---------------------------------------------------------------------------

struct QuadRunSetup {
    std::string name = "quad";
    std::function<QuadReference(double)> reference;
    ConstraintSet constraints;
    QuadGains gains;
    RobustModel robust;
    QuadrotorParams plant;
    DisturbanceModel dist_p;
    DisturbanceModel dist_q;
    std::vector<PayloadEvent> events;
    QuadrotorState init;
    QuadControllerKind controller = QuadControllerKind::pos_att_blf;
    double dt = 1e-3;
    double horizon = 10.0;
    Integrator integrator = Integrator::rk4;
    double filter_tc = 0.02;
};

namespace detail {

inline VecN<12> pack(const QuadrotorState& s) {
    VecN<12> x;
    x << s.p, s.v, s.q, s.w;
    return x;
}

inline QuadrotorState unpack(const VecN<12>& x) {
    QuadrotorState s;
    s.p = x.segment<3>(0);
    s.v = x.segment<3>(3);
    s.q = x.segment<3>(6);
    s.w = x.segment<3>(9);
    return s;
}

}  // namespace detail

inline SimLog run_quadrotor(const QuadRunSetup& setup) {
    if (!(setup.dt > 0.0) || setup.horizon < setup.dt)
        throw ConfigError("run_quadrotor: need dt > 0 and horizon >= dt");
    const bool is_smc = setup.controller == QuadControllerKind::smc;
    const bool full = setup.controller == QuadControllerKind::full_state_blf;

    // fresh controller per run (filters carry local state)
    QuadBlfController blf(is_smc ? QuadControllerKind::pos_att_blf : setup.controller,
                          setup.gains, setup.constraints, setup.robust, setup.filter_tc);
    QuadSmcController smc(setup.gains, setup.constraints, setup.robust, setup.filter_tc);
    auto compute = [&](const QuadrotorState& s, const QuadReference& r,
                       double dt) -> ControlOutput {
        return is_smc ? smc.compute(s, r, dt) : blf.compute(s, r, dt);
    };

    SimLog log;
    log.dof = 3;
    log.full_state = full;
    log.dt = setup.dt;

    QuadrotorParams plant = setup.plant;
    std::vector<PayloadEvent> events = setup.events;
    std::sort(events.begin(), events.end(),
              [](const PayloadEvent& a, const PayloadEvent& b) { return a.time < b.time; });
    size_t next_event = 0;

    QuadrotorState state = setup.init;
    const auto n_steps = static_cast<long>(std::llround(setup.horizon / setup.dt));
    log.records.reserve(static_cast<size_t>(n_steps) + 1);

    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * setup.dt;

        // events fire before the step in which they fall
        while (next_event < events.size() && events[next_event].time <= t + 1e-12) {
            plant = apply_payload_event(plant, events[next_event]);
            ++next_event;
        }

        ControlOutput u;
        bool boundary_hit = false;
        std::string boundary_msg;
        try {
            u = compute(state, setup.reference(t), setup.dt);
        } catch (const ConstraintBoundaryReached& e) {
            if (k == 0) throw InfeasibleInitialCondition(e.what());
            boundary_hit = true;
            boundary_msg = e.what();
        } catch (const Error& e) {
            log.status = TerminalStatus::numeric_failure;
            log.detail = e.what();
            return log;
        }

        SimRecord rec;
        rec.t = t;
        rec.p = state.p;
        rec.v = state.v;
        rec.q = state.q;
        rec.w = state.w;
        rec.mass = plant.m;

        if (boundary_hit) {
            rec.violation = true;
            log.records.push_back(rec);
            log.status = TerminalStatus::aborted_violation;
            log.detail = boundary_msg;
            return log;
        }

        const QuadReference ref = setup.reference(t);
        rec.p_d = ref.pos.p;
        rec.pdot_d = ref.pos.v;
        rec.q_d = u.q_d;
        rec.qdot_d = u.qdot_d;
        rec.z_p = u.errors.z_p;
        rec.z_2p = u.errors.z_2p;
        rec.z_q = u.errors.z_q;
        rec.z_2q = u.errors.z_2q;
        rec.zdot_p = u.errors.zdot_p;
        rec.zdot_q = u.errors.zdot_q;
        rec.tau_p = u.tau_p;
        rec.tau_q = u.tau_q;
        rec.u1 = u.u1;
        rec.rho_p = u.rho_p;
        rec.rho_q = u.rho_q;
        rec.V = u.V;
        rec.alpha_p = u.alpha_p;
        rec.alphadot_p = u.alphadot_p;
        rec.alpha_q = u.alpha_q;
        rec.alphadot_q = u.alphadot_q;
        rec.dist_p = eval_disturbance(setup.dist_p, t);
        rec.dist_q = quad_rotational_disturbance(state, t, plant, setup.dist_q);
        rec.eta_p_norm = true_eta_p(u.nu_p, plant.m, rec.dist_p, setup.robust).norm();
        rec.eta_q_norm =
            true_eta_q(u.nu_q, state.w, plant.J_diag, rec.dist_q, setup.robust).norm();

        const auto violation = check_quad_constraints(u.errors, setup.constraints, full);
        if (violation) {
            rec.violation = true;
            if (!is_smc) {
                if (k == 0)
                    throw InfeasibleInitialCondition("initial " + violation->channel +
                                                     " outside its bound");
                log.records.push_back(rec);
                log.status = TerminalStatus::aborted_violation;
                log.detail = violation->channel + "[" + std::to_string(violation->index) +
                             "] = " + std::to_string(violation->value);
                return log;
            }
        }
        log.records.push_back(rec);
        if (k == n_steps) break;

        // thrust magnitude and attitude torque are held over the step; the
        // realized force follows the evolving body attitude
        const double u1 = u.u1;
        const Vec3 tau_q = u.tau_q;
        auto deriv = [&](double ti, const VecN<12>& x) -> VecN<12> {
            const QuadrotorState si = detail::unpack(x);
            const Vec3 force = rotation_zyx(si.q) * Vec3(0.0, 0.0, u1);
            VecN<12> dx;
            dx.segment<3>(0) = si.v;
            dx.segment<3>(3) = quad_translational_accel(si, force, ti, plant, setup.dist_p);
            dx.segment<3>(6) = si.w;
            dx.segment<3>(9) = quad_rotational_accel(si, tau_q, ti, plant, setup.dist_q);
            return dx;
        };
        VecN<12> next;
        try {
            next = setup.integrator == Integrator::rk4
                       ? rk4_step<12>(t, detail::pack(state), setup.dt, deriv)
                       : euler_step<12>(t, detail::pack(state), setup.dt, deriv);
        } catch (const Error& e) {
            log.status = TerminalStatus::numeric_failure;
            log.detail = e.what();
            return log;
        }
        if (!next.allFinite()) {
            log.status = TerminalStatus::numeric_failure;
            log.detail = "state became non-finite at t = " + std::to_string(t);
            return log;
        }
        state = detail::unpack(next);
    }
    log.status = TerminalStatus::completed;
    return log;
}

// ---------------------------------------------------------------------------
// Manipulator closed loop
// ---------------------------------------------------------------------------

enum class ElControllerKind { blf_sym, blf_asym, pid };

struct ElRunSetup {
    std::string name = "manipulator";
    std::function<ElRef<2>(double)> reference;
    ElBlfConfig<2> blf;
    PidGains<2> pid;
    ManipulatorParams plant;
    DisturbanceModel dist;
    ElState<2> init;
    ElControllerKind controller = ElControllerKind::blf_sym;
    double dt = 1e-3;
    double horizon = 30.0;
    Integrator integrator = Integrator::rk4;
    ControlUpdate control_update = ControlUpdate::zoh;
};

inline SimLog run_manipulator(const ElRunSetup& setup) {
    if (!(setup.dt > 0.0) || setup.horizon < setup.dt)
        throw ConfigError("run_manipulator: need dt > 0 and horizon >= dt");
    const bool is_pid = setup.controller == ElControllerKind::pid;
    if (is_pid && setup.control_update == ControlUpdate::continuous)
        throw ConfigError("continuous control update requires a stateless control law");

    ElBlfConfig<2> cfg = setup.blf;
    cfg.symmetric = setup.controller != ElControllerKind::blf_asym;
    const ManipulatorModel model{setup.plant, setup.dist};
    PidController<2> pid(setup.pid);

    SimLog log;
    log.dof = 2;
    log.dt = setup.dt;

    ElState<2> state = setup.init;
    const auto n_steps = static_cast<long>(std::llround(setup.horizon / setup.dt));
    log.records.reserve(static_cast<size_t>(n_steps) + 1);

    auto window_violation = [&](const VecN<2>& z1) -> bool {
        for (int i = 0; i < 2; ++i) {
            if (cfg.symmetric) {
                if (std::abs(z1(i)) >= cfg.k_b(i)) return true;
            } else {
                if (z1(i) <= -cfg.k_a(i) || z1(i) >= cfg.k_b(i)) return true;
            }
        }
        return false;
    };

    for (long k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * setup.dt;
        const ElRef<2> ref = setup.reference(t);

        ElBlfOutput<2> u;
        bool boundary_hit = false;
        std::string boundary_msg;
        try {
            u = is_pid ? pid.compute(state, ref, model, setup.dt)
                       : el_blf_control<2>(state, ref, cfg, model, t);
        } catch (const ConstraintBoundaryReached& e) {
            if (k == 0) throw InfeasibleInitialCondition(e.what());
            boundary_hit = true;
            boundary_msg = e.what();
        }

        SimRecord rec;
        rec.t = t;
        rec.p.head<2>() = state.q;
        rec.v.head<2>() = state.qdot;
        rec.p_d.head<2>() = ref.q;
        rec.pdot_d.head<2>() = ref.qdot;

        if (boundary_hit) {
            rec.violation = true;
            log.records.push_back(rec);
            log.status = TerminalStatus::aborted_violation;
            log.detail = boundary_msg;
            return log;
        }

        rec.z_p.head<2>() = u.z1;
        rec.z_2p.head<2>() = u.z2;
        rec.zdot_p.head<2>() = state.qdot - ref.qdot;
        rec.tau_p.head<2>() = u.tau;
        rec.alpha_p.head<2>() = u.alpha;
        rec.alphadot_p.head<2>() = u.alphadot;
        rec.V = u.V;
        rec.dist_p.head<2>() = eval_disturbance(setup.dist, t).head<2>();

        if (window_violation(u.z1)) {
            rec.violation = true;
            if (!is_pid) {
                if (k == 0) throw InfeasibleInitialCondition("initial z1 outside its bound");
                log.records.push_back(rec);
                log.status = TerminalStatus::aborted_violation;
                log.detail = "z1 left its constraint window";
                return log;
            }
        }
        log.records.push_back(rec);
        if (k == n_steps) break;

        const VecN<2> tau_frozen = u.tau;
        auto deriv = [&](double ti, const VecN<4>& x) -> VecN<4> {
            ElState<2> si{x.head<2>(), x.tail<2>()};
            VecN<2> tau = tau_frozen;
            if (setup.control_update == ControlUpdate::continuous)
                tau = el_blf_control<2>(si, setup.reference(ti), cfg, model, ti).tau;
            VecN<4> dx;
            dx.head<2>() = si.qdot;
            dx.tail<2>() = manipulator_accel(si, tau, ti, setup.plant, setup.dist);
            return dx;
        };
        VecN<4> x;
        x << state.q, state.qdot;
        VecN<4> next;
        try {
            next = setup.integrator == Integrator::rk4 ? rk4_step<4>(t, x, setup.dt, deriv)
                                                       : euler_step<4>(t, x, setup.dt, deriv);
        } catch (const ConstraintBoundaryReached& e) {
            log.status = TerminalStatus::aborted_violation;
            log.detail = e.what();
            return log;
        } catch (const Error& e) {
            log.status = TerminalStatus::numeric_failure;
            log.detail = e.what();
            return log;
        }
        if (!next.allFinite()) {
            log.status = TerminalStatus::numeric_failure;
            log.detail = "state became non-finite at t = " + std::to_string(t);
            return log;
        }
        state.q = next.head<2>();
        state.qdot = next.tail<2>();
    }
    log.status = TerminalStatus::completed;
    return log;
}

// ---------------------------------------------------------------------------
// Lyapunov monitors
// ---------------------------------------------------------------------------

struct MonitorReport {
    long total_steps = 0;
    long eligible_steps = 0;  // steps the check applies to
    long flagged_steps = 0;
    double varsigma = 0.0;
    double tolerance = 0.0;
    double c_measured = 0.0;     // max over steps of (Vdot + varsigma V), clipped at 0
    double max_abs_vdot = 0.0;
    double worst_margin = 0.0;   // most positive (Vdot + varsigma V - tol) among eligible
};

/// Central-difference decrease check for the quadrotor barrier designs:
/// outside both boundary layers the certificate demands Vdot <= -varsigma V
/// up to discretization tolerance.
inline MonitorReport monitor_quad_lyapunov(const SimLog& log, const QuadGains& g,
                                           double tol_factor = 1e-3) {
    MonitorReport rep;
    rep.varsigma = std::min(std::min(g.lambda_1p.minCoeff(), g.lambda_1q.minCoeff()),
                            std::min(g.lambda_2p.minCoeff(), g.lambda_2q.minCoeff()));
    const auto& r = log.records;
    rep.total_steps = static_cast<long>(r.size());
    if (r.size() < 3) return rep;

    std::vector<double> vdot(r.size(), 0.0);
    for (size_t k = 1; k + 1 < r.size(); ++k) {
        vdot[k] = (r[k + 1].V - r[k - 1].V) / (r[k + 1].t - r[k - 1].t);
        rep.max_abs_vdot = std::max(rep.max_abs_vdot, std::abs(vdot[k]));
    }
    rep.tolerance = tol_factor * rep.max_abs_vdot;
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    for (size_t k = 1; k + 1 < r.size(); ++k) {
        if (r[k].z_2p.norm() < g.eps_p || r[k].z_2q.norm() < g.eps_q) continue;
        ++rep.eligible_steps;
        const double excess = vdot[k] + rep.varsigma * r[k].V;
        rep.c_measured = std::max(rep.c_measured, excess);
        rep.worst_margin = std::max(rep.worst_margin, excess - rep.tolerance);
        if (excess > rep.tolerance) ++rep.flagged_steps;
    }
    if (rep.eligible_steps == 0) rep.worst_margin = 0.0;
    return rep;
}

/// Exact-cancellation check for the exact-model EL controller: the measured
/// Vdot must equal -z1' K1 z1 - z2' K2 z2. Returns the fraction of interior
/// steps within the relative tolerance.
struct CancellationReport {
    long checked = 0;
    long within_tol = 0;
    double worst_rel_err = 0.0;
    double fraction() const { return checked ? static_cast<double>(within_tol) / checked : 1.0; }
};

inline CancellationReport monitor_el_cancellation(const SimLog& log, const ElBlfGains<2>& gains,
                                                  double rel_tol = 1e-5) {
    CancellationReport rep;
    const auto& r = log.records;
    for (size_t k = 1; k + 1 < r.size(); ++k) {
        const double vdot = (r[k + 1].V - r[k - 1].V) / (r[k + 1].t - r[k - 1].t);
        const VecN<2> z1 = r[k].z_p.head<2>();
        const VecN<2> z2 = r[k].z_2p.head<2>();
        const double expected =
            -z1.cwiseProduct(gains.K1).dot(z1) - z2.cwiseProduct(gains.K2).dot(z2);
        const double rel = std::abs(vdot - expected) / std::max(std::abs(expected), 1e-300);
        ++rep.checked;
        if (rel <= rel_tol)
            ++rep.within_tol;
        else
            rep.worst_rel_err = std::max(rep.worst_rel_err, rel);
    }
    return rep;
}

}  // namespace blfctl
