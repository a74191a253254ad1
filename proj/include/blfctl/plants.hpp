#pragma once

#include <cmath>
#include <utility>

#include "blfctl/math.hpp"

namespace blfctl {

// ---------------------------------------------------------------------------
// Disturbances
// ---------------------------------------------------------------------------

/// External disturbance acting on one dynamics channel. The realized signal is
/// guaranteed to stay inside `bound` per axis; simulations assert this on
/// every evaluation.
struct DisturbanceModel {
    enum class Kind { none, sinusoid, wind };

    Kind kind = Kind::none;
    Vec3 amplitude = Vec3::Zero();   // per-axis amplitude (sinusoid)
    double frequency = 0.0;          // rad/s (sinusoid)
    Vec3 phase = Vec3::Zero();       // per-axis phase (sinusoid)
    double azimuth = 0.0;            // rad, wind direction in the x-y plane
    double mean_force = 0.0;         // N, steady wind force magnitude
    double gust_fraction = 0.0;      // relative gust amplitude on top of the mean
    Vec3 gust_frequency = Vec3::Zero();
    Vec3 gust_phase = Vec3::Zero();
    double vertical_amplitude = 0.0; // N, wind-induced vertical gust
    Vec3 bound = Vec3::Zero();       // documented per-axis envelope

    static DisturbanceModel none() { return {}; }

    static DisturbanceModel sinusoid(const Vec3& amplitude, double frequency,
                                     const Vec3& phase = Vec3::Zero()) {
        DisturbanceModel m;
        m.kind = Kind::sinusoid;
        m.amplitude = amplitude;
        m.frequency = frequency;
        m.phase = phase;
        m.bound = amplitude.cwiseAbs();
        return m;
    }

    /// Steady wind of force `mean_force` blowing at `azimuth` in the x-y
    /// plane, with band-limited sinusoidal gusting and a small vertical
    /// component. The bound is the worst-case envelope of the realization.
    static DisturbanceModel wind(double mean_force, double azimuth, double gust_fraction,
                                 const Vec3& gust_frequency, const Vec3& gust_phase,
                                 double vertical_amplitude) {
        DisturbanceModel m;
        m.kind = Kind::wind;
        m.mean_force = mean_force;
        m.azimuth = azimuth;
        m.gust_fraction = gust_fraction;
        m.gust_frequency = gust_frequency;
        m.gust_phase = gust_phase;
        m.vertical_amplitude = vertical_amplitude;
        const double horiz = mean_force * (1.0 + gust_fraction);
        m.bound = Vec3(horiz * std::abs(std::cos(azimuth)), horiz * std::abs(std::sin(azimuth)),
                       vertical_amplitude);
        // guard against exactly-zero bounds on active axes
        for (int i = 0; i < 3; ++i) m.bound(i) += 1e-12;
        return m;
    }
};

inline Vec3 eval_disturbance(const DisturbanceModel& m, double t) {
    Vec3 d = Vec3::Zero();
    switch (m.kind) {
        case DisturbanceModel::Kind::none:
            return d;
        case DisturbanceModel::Kind::sinusoid:
            for (int i = 0; i < 3; ++i)
                d(i) = m.amplitude(i) * std::sin(m.frequency * t + m.phase(i));
            break;
        case DisturbanceModel::Kind::wind: {
            const double gx = 1.0 + m.gust_fraction * std::sin(m.gust_frequency(0) * t + m.gust_phase(0));
            const double gy = 1.0 + m.gust_fraction * std::sin(m.gust_frequency(1) * t + m.gust_phase(1));
            d(0) = m.mean_force * std::cos(m.azimuth) * gx;
            d(1) = m.mean_force * std::sin(m.azimuth) * gy;
            d(2) = m.vertical_amplitude * std::sin(m.gust_frequency(2) * t + m.gust_phase(2));
            break;
        }
    }
    for (int i = 0; i < 3; ++i) {
        if (std::abs(d(i)) > m.bound(i) + 1e-12)
            throw NumericFailure("disturbance exceeded its declared bound");
    }
    return d;
}

// ---------------------------------------------------------------------------
// Generic Euler-Lagrange state and the two-link manipulator
// ---------------------------------------------------------------------------

template <int N>
struct ElState {
    VecN<N> q = VecN<N>::Zero();
    VecN<N> qdot = VecN<N>::Zero();
};

struct ManipulatorParams {
    double m1 = 10.0;  // kg
    double m2 = 5.0;   // kg
    double l1 = 0.2;   // m
    double l2 = 0.1;   // m
    double fv1 = 0.5;
    double fv2 = 0.5;
    double g = 9.81;   // m/s^2
};

inline MatN<2> manipulator_inertia(const ManipulatorParams& p, const VecN<2>& q) {
    const double c2 = std::cos(q(1));
    MatN<2> m;
    m(0, 0) = (p.m1 + p.m2) * p.l1 * p.l1 + p.m2 * p.l2 * (p.l2 + 2.0 * p.l1 * c2);
    m(0, 1) = p.m2 * p.l2 * (p.l2 + p.l1 * c2);
    m(1, 0) = m(0, 1);
    m(1, 1) = p.m2 * p.l2 * p.l2;
    return m;
}

/// Christoffel-consistent Coriolis matrix: (Mdot - 2C) is skew-symmetric.
inline MatN<2> manipulator_coriolis(const ManipulatorParams& p, const VecN<2>& q,
                                    const VecN<2>& qdot) {
    const double h = p.m2 * p.l1 * p.l2 * std::sin(q(1));
    MatN<2> c;
    c << -h * qdot(1), -h * (qdot(0) + qdot(1)),
          h * qdot(0), 0.0;
    return c;
}

inline VecN<2> manipulator_gravity(const ManipulatorParams& p, const VecN<2>& q) {
    VecN<2> g;
    g(0) = p.m1 * p.l1 * p.g * std::cos(q(0)) +
           p.m2 * p.g * (p.l2 * std::cos(q(0) + q(1)) + p.l1 * std::cos(q(0)));
    g(1) = p.m2 * p.g * p.l2 * std::cos(q(0) + q(1));
    return g;
}

/// Viscous-sign friction, smoothed as tanh(qdot/0.01) so the integrator does
/// not chatter across qdot = 0. Magnitude bound is unchanged.
inline VecN<2> manipulator_friction(const ManipulatorParams& p, const VecN<2>& qdot) {
    VecN<2> f;
    f(0) = p.fv1 * std::tanh(qdot(0) / 0.01);
    f(1) = p.fv2 * std::tanh(qdot(1) / 0.01);
    return f;
}

/// Forward dynamics: qddot = M^{-1} (tau - C qdot - g - f - d).
inline VecN<2> manipulator_accel(const ElState<2>& s, const VecN<2>& tau, double t,
                                 const ManipulatorParams& p, const DisturbanceModel& dist) {
    require_finite(tau, "manipulator_accel/tau");
    const MatN<2> m = manipulator_inertia(p, s.q);
    Eigen::SelfAdjointEigenSolver<MatN<2>> es(m);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e12)
        throw SingularInertia("manipulator inertia matrix is ill-conditioned");
    const VecN<2> d = eval_disturbance(dist, t).head<2>();
    const VecN<2> rhs = tau - manipulator_coriolis(p, s.q, s.qdot) * s.qdot -
                        manipulator_gravity(p, s.q) - manipulator_friction(p, s.qdot) - d;
    return m.ldlt().solve(rhs);
}

// ---------------------------------------------------------------------------
// Quadrotor
// ---------------------------------------------------------------------------

/// Position/velocity in the world frame; attitude as Z-Y-X Euler angles
/// (roll, pitch, yaw) with their rates. Valid while |theta| < pi/2.
struct QuadrotorState {
    Vec3 p = Vec3::Zero();  // m
    Vec3 v = Vec3::Zero();  // m/s
    Vec3 q = Vec3::Zero();  // rad
    Vec3 w = Vec3::Zero();  // rad/s (Euler-angle rates)
};

/// True plant parameters. Controllers never see these; they work from their
/// own nominal model.
struct QuadrotorParams {
    double m = 2.0;                     // kg, total (payload-dependent)
    Vec3 J_diag = Vec3(0.02, 0.02, 0.04);  // kg m^2
    double g = 9.81;
    Vec3 com_offset = Vec3::Zero();     // m, payload COM misalignment (body frame)
    double payload_mass = 0.0;          // kg, mass associated with com_offset
};

/// Gyroscopic Coriolis matrix treating the attitude-rate vector as the body
/// rate: C(qdot) = skew(qdot) J. Satisfies qdot^T C qdot = 0.
inline Mat3 quad_coriolis(const Vec3& J_diag, const Vec3& qdot) {
    return skew(qdot) * J_diag.asDiagonal();
}

/// Torque induced by a payload whose COM is offset from the vehicle COM:
/// the payload weight, expressed in the body frame, acts on the offset arm.
inline Vec3 payload_offset_torque(const QuadrotorParams& p, const Vec3& attitude) {
    if (p.payload_mass <= 0.0 || p.com_offset.isZero()) return Vec3::Zero();
    const Vec3 weight_world(0.0, 0.0, -p.payload_mass * p.g);
    const Vec3 weight_body = rotation_zyx(attitude).transpose() * weight_world;
    return p.com_offset.cross(weight_body);
}

/// Total rotational disturbance: external gusts plus payload COM torque.
inline Vec3 quad_rotational_disturbance(const QuadrotorState& s, double t,
                                        const QuadrotorParams& p,
                                        const DisturbanceModel& dist_q) {
    return eval_disturbance(dist_q, t) + payload_offset_torque(p, s.q);
}

/// pddot = (f - [0,0,mg] - d_p) / m, for the world-frame force f actually
/// applied to the airframe.
inline Vec3 quad_translational_accel(const QuadrotorState& s, const Vec3& force, double t,
                                     const QuadrotorParams& p, const DisturbanceModel& dist_p) {
    require_finite(force, "quad_translational_accel/force");
    (void)s;
    if (!(p.m > 0.0)) throw NonPositiveMass(p.m);
    const Vec3 grav(0.0, 0.0, p.m * p.g);
    return (force - grav - eval_disturbance(dist_p, t)) / p.m;
}

/// qddot = J^{-1} (tau_q - C(qdot) qdot - d_q), d_q including any payload
/// COM torque.
inline Vec3 quad_rotational_accel(const QuadrotorState& s, const Vec3& tau_q, double t,
                                  const QuadrotorParams& p, const DisturbanceModel& dist_q) {
    require_finite(tau_q, "quad_rotational_accel/tau_q");
    if (!(p.J_diag.minCoeff() > 0.0))
        throw SingularInertia("quadrotor inertia must be positive definite");
    const Vec3 d = quad_rotational_disturbance(s, t, p, dist_q);
    const Vec3 rhs = tau_q - quad_coriolis(p.J_diag, s.w) * s.w - d;
    return rhs.cwiseQuotient(p.J_diag);
}

/// The airframe can only push along its body z-axis. The commanded force
/// tau_p fixes the thrust magnitude u1 = ||tau_p||; what the plant feels is
/// R [0,0,u1], so attitude error perturbs position tracking exactly as in the
/// coupled system.
inline std::pair<double, Vec3> realize_thrust(const Vec3& tau_p, const Mat3& R) {
    const double u1 = tau_p.norm();
    if (u1 < 1e-9) throw ZeroThrustDirection();
    return {u1, R * Vec3(0.0, 0.0, u1)};
}

// ---------------------------------------------------------------------------
// Payload events
// ---------------------------------------------------------------------------

/// Pickup (positive delta_mass) or drop (negative) at a given time. Only the
/// true plant changes; the controller's nominal model is deliberately left
/// untouched so the mismatch lands on the robust gains.
struct PayloadEvent {
    double time = 0.0;        // s
    double delta_mass = 0.0;  // kg
    Vec3 offset = Vec3::Zero();
};

inline QuadrotorParams apply_payload_event(const QuadrotorParams& params, const PayloadEvent& ev) {
    QuadrotorParams out = params;
    out.m = params.m + ev.delta_mass;
    if (!(out.m > 0.0)) throw NonPositiveMass(out.m);
    if (ev.delta_mass > 0.0) {
        out.com_offset = ev.offset;
        out.payload_mass = ev.delta_mass;
    } else {
        out.com_offset = Vec3::Zero();
        out.payload_mass = 0.0;
    }
    return out;
}

}  // namespace blfctl
