#pragma once

#include "blfctl/math.hpp"

namespace blfctl {

/// Nominal model and uncertainty envelope available to the robust
/// controllers. The true plant may deviate from (m_bar, J_bar) by at most the
/// fractions E_p, E_q in the sense |m^{-1} m_bar - 1| <= E_p and
/// ||J^{-1} J_bar - I|| <= E_q, and the disturbances stay inside the declared
/// per-axis bounds.
struct RobustModel {
    double m_bar = 2.0;
    Vec3 J_bar_diag = Vec3(0.02, 0.02, 0.04);
    double E_p = 0.3;
    double E_q = 0.3;
    Vec3 d_p_bound = Vec3::Zero();
    Vec3 d_q_bound = Vec3::Zero();
    double g = 9.81;

    Vec3 g_bar() const { return Vec3(0.0, 0.0, m_bar * g); }
    Mat3 C_bar(const Vec3& qdot) const { return skew(qdot) * J_bar_diag.asDiagonal(); }

    void validate() const {
        if (!(E_p >= 0.0 && E_p < 1.0)) throw InvalidUncertaintyBound(E_p);
        if (!(E_q >= 0.0 && E_q < 1.0)) throw InvalidUncertaintyBound(E_q);
        if (!(m_bar > 0.0)) throw NonPositiveMass(m_bar);
        if (!(J_bar_diag.minCoeff() > 0.0))
            throw SingularInertia("nominal inertia must be positive definite");
    }

    // Worst-case quantities over the admissible plant set, used by the gain
    // synthesizers below. The admissible mass interval is
    // [m_bar/(1+E_p), m_bar/(1-E_p)], and likewise per inertia axis.
    double m_min() const { return m_bar / (1.0 + E_p); }
    double grav_mismatch_max() const { return g * m_bar * E_p / (1.0 - E_p); }
    double J_inv_norm_max() const { return (1.0 + E_q) / J_bar_diag.minCoeff(); }
    double delta_J_max() const { return J_bar_diag.maxCoeff() * E_q / (1.0 - E_q); }
};

/// Scalar robust gain for the position loop: an upper bound on the lumped
/// uncertainty (m^{-1} m_bar - 1) nu_p + m^{-1} (g_bar - g - d_p) that holds
/// for every admissible plant. Monotone nondecreasing in ||nu_bar_p||, E_p
/// and the disturbance bound.
inline double rho_p_gain(const Vec3& nu_bar_p, const RobustModel& rm) {
    rm.validate();
    if (rm.E_p == 0.0 && rm.d_p_bound.isZero()) return 0.0;
    const double worst = (rm.grav_mismatch_max() + rm.d_p_bound.norm()) / rm.m_min();
    return (rm.E_p * nu_bar_p.norm() + worst) / (1.0 - rm.E_p);
}

/// Rotational analogue: bounds (J^{-1} J_bar - I) nu_q + J^{-1}(-d_q - dC qdot)
/// with ||dC|| <= ||qdot|| dJ_max for the gyroscopic Coriolis form.
inline double rho_q_gain(const Vec3& nu_bar_q, const Vec3& qdot, const RobustModel& rm) {
    rm.validate();
    if (rm.E_q == 0.0 && rm.d_q_bound.isZero()) return 0.0;
    const double dC = rm.delta_J_max() * qdot.norm();
    const double worst = rm.J_inv_norm_max() * (dC * qdot.norm() + rm.d_q_bound.norm());
    return (rm.E_q * nu_bar_q.norm() + worst) / (1.0 - rm.E_q);
}

/// True lumped uncertainty in the position dynamics, computable only by the
/// simulator (which knows the realized plant). Used to audit rho_p >= ||eta_p||.
inline Vec3 true_eta_p(const Vec3& nu_p, double m_true, const Vec3& d_p, const RobustModel& rm) {
    const Vec3 g_true(0.0, 0.0, m_true * rm.g);
    return (rm.m_bar / m_true - 1.0) * nu_p + (rm.g_bar() - g_true - d_p) / m_true;
}

/// True lumped uncertainty in the attitude dynamics (audit counterpart of
/// rho_q_gain).
inline Vec3 true_eta_q(const Vec3& nu_q, const Vec3& qdot, const Vec3& J_true_diag,
                       const Vec3& d_q, const RobustModel& rm) {
    const Vec3 ratio = rm.J_bar_diag.cwiseQuotient(J_true_diag) - Vec3::Ones();
    const Mat3 delta_C = skew(qdot) * (J_true_diag - rm.J_bar_diag).asDiagonal();
    const Vec3 rest = (-d_q - delta_C * qdot).cwiseQuotient(J_true_diag);
    return ratio.cwiseProduct(nu_q) + rest;
}

}  // namespace blfctl
