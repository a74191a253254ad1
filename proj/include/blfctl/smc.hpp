#pragma once

#include "blfctl/quad_blf.hpp"

namespace blfctl {

/// Sliding-mode baseline with boundary layer, tuned for parity with the
/// barrier controllers: same surface slopes Lambda_1, same layer widths and
/// the same robust-gain synthesizers, but no barrier action. Surfaces
///   s_p = zdot_p + Lambda_1p z_p,  s_q = zdot_q + Lambda_1q z_q
/// with the reaching law -rho sat(s, eps) on top of the nominal feedforward.
class QuadSmcController {
  public:
    QuadSmcController(const QuadGains& gains, const ConstraintSet& cons,
                      const RobustModel& robust, double filter_tc = 0.02)
        : gains_(gains), cons_(cons), robust_(robust), rate_filter_(filter_tc),
          acc_filter_(filter_tc) {
        gains_.validate();
        robust_.validate();
    }

    ControlOutput compute(const QuadrotorState& s, const QuadReference& ref, double dt) {
        ControlOutput out;

        const Vec3 z_p = s.p - ref.pos.p;
        const Vec3 zdot_p = s.v - ref.pos.v;
        const Vec3 s_p = zdot_p + gains_.lambda_1p.cwiseProduct(z_p);
        const Vec3 nu_bar_p = ref.pos.a - gains_.lambda_1p.cwiseProduct(zdot_p);
        out.rho_p = rho_p_gain(nu_bar_p, robust_);
        out.nu_p = nu_bar_p - out.rho_p * sat(s_p, gains_.eps_p);
        out.tau_p = robust_.m_bar * out.nu_p + robust_.g_bar();
        out.u1 = out.tau_p.norm();
        out.nu_bar_p = nu_bar_p;

        const AttitudeSetpoint sp = desired_attitude(out.tau_p, ref.yaw.psi);
        out.q_d = Vec3(sp.phi_d, sp.theta_d, ref.yaw.psi);
        Vec3 qdot_d = rate_filter_.update(out.q_d, dt);
        qdot_d(2) = ref.yaw.psidot;
        Vec3 qddot_d = acc_filter_.update(qdot_d, dt);
        qddot_d(2) = ref.yaw.psiddot;
        out.qdot_d = qdot_d;

        const Mat3 R = rotation_zyx(s.q);
        const Vec3 z_q = attitude_error(R, sp.R_d);
        const Vec3 zdot_q = s.w - qdot_d;
        const Vec3 s_q = zdot_q + gains_.lambda_1q.cwiseProduct(z_q);
        const Vec3 nu_bar_q = qddot_d - gains_.lambda_1q.cwiseProduct(zdot_q);
        out.rho_q = rho_q_gain(nu_bar_q, s.w, robust_);
        out.nu_q = nu_bar_q - out.rho_q * sat(s_q, gains_.eps_q);
        out.tau_q = robust_.J_bar_diag.cwiseProduct(out.nu_q) + robust_.C_bar(s.w) * s.w;
        out.nu_bar_q = nu_bar_q;

        out.errors = {z_p, s_p, z_q, s_q, zdot_p, zdot_q};
        out.R_d = sp.R_d;
        out.V = 0.0;  // no Lyapunov certificate for the baseline
        return out;
    }

    void reset() {
        rate_filter_.reset();
        acc_filter_.reset();
    }

    const ConstraintSet& constraints() const { return cons_; }

  private:
    QuadGains gains_;
    ConstraintSet cons_;
    RobustModel robust_;
    RateFilter rate_filter_;
    RateFilter acc_filter_;
};

}  // namespace blfctl
