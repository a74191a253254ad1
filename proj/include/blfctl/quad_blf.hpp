#pragma once

#include <optional>
#include <string>

#include "blfctl/attitude.hpp"
#include "blfctl/math.hpp"
#include "blfctl/plants.hpp"
#include "blfctl/reference.hpp"
#include "blfctl/robust.hpp"

namespace blfctl {

/// User-specified error bounds. Position/attitude bounds are always active;
/// the velocity and rate bounds participate only in the full-state design,
/// which also derives the auxiliary-error bounds k2 = kdot + gamma .* k.
struct ConstraintSet {
    Vec3 k_p = Vec3(0.3, 0.3, 0.16);
    Vec3 k_q = Vec3(0.5, 0.5, 0.25);
    Vec3 kdot_p = Vec3(0.55, 0.55, 0.7);
    Vec3 kdot_q = Vec3(0.43, 0.43, 0.174);
    Eigen::VectorXd k_a, k_b;  // asymmetric bounds for the generic EL design

    Vec3 k2p(const Vec3& gamma_p) const { return kdot_p + gamma_p.cwiseProduct(k_p); }
    Vec3 k2q(const Vec3& gamma_q) const { return kdot_q + gamma_q.cwiseProduct(k_q); }

    void validate() const {
        if (!(k_p.minCoeff() > 0.0 && k_q.minCoeff() > 0.0 && kdot_p.minCoeff() > 0.0 &&
              kdot_q.minCoeff() > 0.0))
            throw ConfigError("constraint bounds must be strictly positive");
    }
};

struct QuadGains {
    Vec3 lambda_1p = Vec3(0.1, 0.1, 0.1);   // diagonal entries of Lambda_1p
    Vec3 lambda_2p = Vec3(6.0, 6.0, 6.0);
    Vec3 lambda_1q = Vec3(24.0, 24.0, 8.0);
    Vec3 lambda_2q = Vec3(15.0, 15.0, 15.0);
    double eps_p = 0.1;  // boundary layer widths
    double eps_q = 1.0;

    void validate() const {
        if (!(lambda_1p.minCoeff() > 0.0 && lambda_2p.minCoeff() > 0.0 &&
              lambda_1q.minCoeff() > 0.0 && lambda_2q.minCoeff() > 0.0 && eps_p > 0.0 &&
              eps_q > 0.0))
            throw ConfigError("controller gains must be strictly positive");
    }
};

struct ErrorState {
    Vec3 z_p = Vec3::Zero();
    Vec3 z_2p = Vec3::Zero();
    Vec3 z_q = Vec3::Zero();
    Vec3 z_2q = Vec3::Zero();
    Vec3 zdot_p = Vec3::Zero();
    Vec3 zdot_q = Vec3::Zero();
};

/// Everything a simulation step needs from the controller, plus the
/// intermediate quantities worth logging.
struct ControlOutput {
    Vec3 tau_p = Vec3::Zero();
    double u1 = 0.0;
    Vec3 tau_q = Vec3::Zero();
    double rho_p = 0.0;
    double rho_q = 0.0;
    ErrorState errors;
    Vec3 alpha_p = Vec3::Zero(), alphadot_p = Vec3::Zero();
    Vec3 alpha_q = Vec3::Zero(), alphadot_q = Vec3::Zero();
    Vec3 nu_p = Vec3::Zero(), nu_q = Vec3::Zero();
    Vec3 nu_bar_p = Vec3::Zero(), nu_bar_q = Vec3::Zero();
    Vec3 q_d = Vec3::Zero(), qdot_d = Vec3::Zero();
    Mat3 R_d = Mat3::Identity();
    double barrier_max = 0.0;  // largest active barrier-gain entry
    double V = 0.0;
};

/// Lyapunov value of the position/attitude barrier design: log barriers on
/// z_p, z_q plus quadratic terms in the auxiliary errors.
namespace detail {
/// 1/2 log(k^2/(k^2 - z^2)) evaluated as -1/2 log1p(-(z/k)^2) so the value
/// keeps relative precision when z is far inside the bound.
inline double barrier_log_term(double z, double k, const char* ch, int i) {
    const double ratio = (z / k) * (z / k);
    if (!(ratio < 1.0)) throw ConstraintBoundaryReached(ch, i, z, k);
    return -0.5 * std::log1p(-ratio);
}
}  // namespace detail

inline double quad_pos_att_lyapunov(const ErrorState& e, const ConstraintSet& c) {
    double v = 0.5 * e.z_2p.squaredNorm() + 0.5 * e.z_2q.squaredNorm();
    for (int i = 0; i < 3; ++i) {
        v += detail::barrier_log_term(e.z_p(i), c.k_p(i), "z_p", i) +
             detail::barrier_log_term(e.z_q(i), c.k_q(i), "z_q", i);
    }
    return v;
}

/// Lyapunov value of the full-state design: log barriers on all four error
/// families (z_p, z_2p, z_q, z_2q).
inline double quad_full_state_lyapunov(const ErrorState& e, const ConstraintSet& c,
                                       const QuadGains& g) {
    const Vec3 k2p = c.k2p(g.lambda_1p);
    const Vec3 k2q = c.k2q(g.lambda_1q);
    double v = 0.0;
    for (int i = 0; i < 3; ++i) {
        v += detail::barrier_log_term(e.z_p(i), c.k_p(i), "z_p", i) +
             detail::barrier_log_term(e.z_2p(i), k2p(i), "z_2p", i) +
             detail::barrier_log_term(e.z_q(i), c.k_q(i), "z_q", i) +
             detail::barrier_log_term(e.z_2q(i), k2q(i), "z_2q", i);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Outer (position) loop
// ---------------------------------------------------------------------------

struct OuterLoopResult {
    Vec3 tau_p, nu_bar_p, nu_p, alpha_p, alphadot_p, z_p, z_2p, zdot_p;
    double rho_p = 0.0;
    double barrier_max = 0.0;
};

/// Robust barrier position law:
///   tau_p  = m_bar nu_p + g_bar,   nu_p = nu_bar_p - rho_p sat(z_2p, eps_p)
///   alpha_p = -Lambda_1p z_p + pd_dot,  z_2p = v - alpha_p
///   nu_bar_p = alphadot_p - Dp z_p - Lambda_2p z_2p
/// In the full-state variant Dp is replaced by D2p^{-1} Dp, with the
/// auxiliary error z_2p constrained inside k2p by its own barrier.
inline OuterLoopResult quad_outer_loop(const QuadrotorState& s, const PosRef& ref,
                                       const QuadGains& g, const ConstraintSet& c,
                                       const RobustModel& rm, bool full_state) {
    OuterLoopResult r;
    r.z_p = s.p - ref.p;
    r.zdot_p = s.v - ref.v;
    r.alpha_p = -g.lambda_1p.cwiseProduct(r.z_p) + ref.v;
    r.alphadot_p = -g.lambda_1p.cwiseProduct(r.zdot_p) + ref.a;
    r.z_2p = s.v - r.alpha_p;

    const DiagGain3 Dp = barrier_gain<3>(r.z_p, c.k_p, "z_p");
    Vec3 gain_z;
    if (full_state) {
        const DiagGain3 D2p = barrier_gain<3>(r.z_2p, c.k2p(g.lambda_1p), "z_2p");
        gain_z = Dp.d.cwiseQuotient(D2p.d);  // D2p^{-1} Dp
        r.barrier_max = std::max(Dp.max(), D2p.max());
    } else {
        gain_z = Dp.d;
        r.barrier_max = Dp.max();
    }

    r.nu_bar_p = r.alphadot_p - gain_z.cwiseProduct(r.z_p) - g.lambda_2p.cwiseProduct(r.z_2p);
    r.rho_p = rho_p_gain(r.nu_bar_p, rm);
    r.nu_p = r.nu_bar_p - r.rho_p * sat(r.z_2p, g.eps_p);
    r.tau_p = rm.m_bar * r.nu_p + rm.g_bar();
    return r;
}

// ---------------------------------------------------------------------------
// Inner (attitude) loop
// ---------------------------------------------------------------------------

struct InnerLoopResult {
    Vec3 tau_q, nu_bar_q, nu_q, z_q, z_2q, zdot_q, alpha_q, alphadot_q;
    double rho_q = 0.0;
    double barrier_max = 0.0;
};

/// Robust barrier attitude law, mirroring the position loop with the vee-map
/// attitude error z_q. Its time derivative is computed exactly from the
/// rotation rates (measured qdot, filtered reference rates), which keeps the
/// analytic alphadot consistent with the realized alpha trajectory.
inline InnerLoopResult quad_inner_loop(const QuadrotorState& s, const Mat3& R_d, const Vec3& q_d,
                                       const Vec3& qdot_d, const Vec3& qddot_d,
                                       const QuadGains& g, const ConstraintSet& c,
                                       const RobustModel& rm, bool full_state) {
    InnerLoopResult r;
    const Mat3 R = rotation_zyx(s.q);
    r.z_q = attitude_error(R, R_d);
    r.zdot_q = s.w - qdot_d;

    const Mat3 Rdot = rotation_zyx_rate(s.q, s.w);
    const Mat3 Rdot_d = rotation_zyx_rate(q_d, qdot_d);
    const Vec3 zq_rate = attitude_error_rate(R, Rdot, R_d, Rdot_d);

    r.alpha_q = -g.lambda_1q.cwiseProduct(r.z_q) + qdot_d;
    r.alphadot_q = -g.lambda_1q.cwiseProduct(zq_rate) + qddot_d;
    r.z_2q = s.w - r.alpha_q;

    const DiagGain3 Dq = barrier_gain<3>(r.z_q, c.k_q, "z_q");
    Vec3 gain_z;
    if (full_state) {
        const DiagGain3 D2q = barrier_gain<3>(r.z_2q, c.k2q(g.lambda_1q), "z_2q");
        gain_z = Dq.d.cwiseQuotient(D2q.d);
        r.barrier_max = std::max(Dq.max(), D2q.max());
    } else {
        gain_z = Dq.d;
        r.barrier_max = Dq.max();
    }

    r.nu_bar_q = r.alphadot_q - gain_z.cwiseProduct(r.z_q) - g.lambda_2q.cwiseProduct(r.z_2q);
    r.rho_q = rho_q_gain(r.nu_bar_q, s.w, rm);
    r.nu_q = r.nu_bar_q - r.rho_q * sat(r.z_2q, g.eps_q);
    r.tau_q = rm.J_bar_diag.cwiseProduct(r.nu_q) + rm.C_bar(s.w) * s.w;
    return r;
}

// ---------------------------------------------------------------------------
// Full co-design controller
// ---------------------------------------------------------------------------

enum class QuadControllerKind { pos_att_blf, full_state_blf, smc };

inline const char* to_string(QuadControllerKind k) {
    switch (k) {
        case QuadControllerKind::pos_att_blf: return "rsb";
        case QuadControllerKind::full_state_blf: return "full_state";
        case QuadControllerKind::smc: return "smc";
    }
    return "?";
}

/// Position/attitude co-design: the outer loop produces tau_p, whose
/// direction defines the desired attitude; the inner loop tracks it and the
/// thrust magnitude is u1 = ||tau_p||. The roll/pitch setpoint rates are
/// estimated by first-order filtered differentiation (no analytic flat-output
/// derivatives exist for them); the yaw channel uses the reference's analytic
/// rates. One controller instance per run: the filters carry local state.
class QuadBlfController {
  public:
    QuadBlfController(QuadControllerKind kind, const QuadGains& gains, const ConstraintSet& cons,
                      const RobustModel& robust, double filter_tc = 0.02)
        : kind_(kind), gains_(gains), cons_(cons), robust_(robust),
          rate_filter_(filter_tc), acc_filter_(filter_tc) {
        gains_.validate();
        cons_.validate();
        robust_.validate();
        if (kind == QuadControllerKind::smc)
            throw ConfigError("use QuadSmcController for the sliding-mode baseline");
    }

    ControlOutput compute(const QuadrotorState& s, const QuadReference& ref, double dt) {
        const bool full = kind_ == QuadControllerKind::full_state_blf;
        ControlOutput out;

        const OuterLoopResult outer =
            quad_outer_loop(s, ref.pos, gains_, cons_, robust_, full);

        const AttitudeSetpoint sp = desired_attitude(outer.tau_p, ref.yaw.psi);
        out.q_d = Vec3(sp.phi_d, sp.theta_d, ref.yaw.psi);
        Vec3 qdot_d = rate_filter_.update(out.q_d, dt);
        qdot_d(2) = ref.yaw.psidot;
        Vec3 qddot_d = acc_filter_.update(qdot_d, dt);
        qddot_d(2) = ref.yaw.psiddot;
        out.qdot_d = qdot_d;

        const InnerLoopResult inner =
            quad_inner_loop(s, sp.R_d, out.q_d, qdot_d, qddot_d, gains_, cons_, robust_, full);

        out.tau_p = outer.tau_p;
        out.u1 = outer.tau_p.norm();
        out.tau_q = inner.tau_q;
        out.rho_p = outer.rho_p;
        out.rho_q = inner.rho_q;
        out.errors = {outer.z_p, outer.z_2p, inner.z_q, inner.z_2q, outer.zdot_p, inner.zdot_q};
        out.alpha_p = outer.alpha_p;
        out.alphadot_p = outer.alphadot_p;
        out.alpha_q = inner.alpha_q;
        out.alphadot_q = inner.alphadot_q;
        out.nu_p = outer.nu_p;
        out.nu_q = inner.nu_q;
        out.nu_bar_p = outer.nu_bar_p;
        out.nu_bar_q = inner.nu_bar_q;
        out.R_d = sp.R_d;
        out.barrier_max = std::max(outer.barrier_max, inner.barrier_max);
        out.V = full ? quad_full_state_lyapunov(out.errors, cons_, gains_)
                     : quad_pos_att_lyapunov(out.errors, cons_);
        return out;
    }

    void reset() {
        rate_filter_.reset();
        acc_filter_.reset();
    }

    const ConstraintSet& constraints() const { return cons_; }
    const QuadGains& gains() const { return gains_; }
    const RobustModel& robust() const { return robust_; }
    QuadControllerKind kind() const { return kind_; }

  private:
    QuadControllerKind kind_;
    QuadGains gains_;
    ConstraintSet cons_;
    RobustModel robust_;
    RateFilter rate_filter_;
    RateFilter acc_filter_;
};

// ---------------------------------------------------------------------------
// Constraint bookkeeping shared by the simulator
// ---------------------------------------------------------------------------

struct ViolationInfo {
    std::string channel;
    int index = -1;
    double value = 0.0;
    double bound = 0.0;
};

/// Check the user-facing constraints: position/attitude always, velocity and
/// attitude-rate only in the full-state design.
inline std::optional<ViolationInfo> check_quad_constraints(const ErrorState& e,
                                                           const ConstraintSet& c,
                                                           bool full_state) {
    auto probe = [](const Vec3& z, const Vec3& k,
                    const char* ch) -> std::optional<ViolationInfo> {
        for (int i = 0; i < 3; ++i)
            if (std::abs(z(i)) >= k(i)) return ViolationInfo{ch, i, z(i), k(i)};
        return std::nullopt;
    };
    if (auto v = probe(e.z_p, c.k_p, "z_p")) return v;
    if (auto v = probe(e.z_q, c.k_q, "z_q")) return v;
    if (full_state) {
        if (auto v = probe(e.zdot_p, c.kdot_p, "zdot_p")) return v;
        if (auto v = probe(e.zdot_q, c.kdot_q, "zdot_q")) return v;
    }
    return std::nullopt;
}

}  // namespace blfctl
