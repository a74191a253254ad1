#pragma once

#include "blfctl/math.hpp"

namespace blfctl {

/// Desired attitude from the commanded position force and the desired yaw
/// (differential-flatness construction): body z along tau_p, x/y chosen to
/// realize psi_d. Returns the desired rotation matrix together with the roll
/// and pitch it encodes in the Z-Y-X convention.
struct AttitudeSetpoint {
    double phi_d = 0.0;
    double theta_d = 0.0;
    Mat3 R_d = Mat3::Identity();
};

inline AttitudeSetpoint desired_attitude(const Vec3& tau_p, double psi_d) {
    const double n = tau_p.norm();
    if (n < 1e-9) throw ZeroThrustDirection();
    const Vec3 z_b = tau_p / n;
    const Vec3 y_a(-std::sin(psi_d), std::cos(psi_d), 0.0);
    const Vec3 cross = y_a.cross(z_b);
    const double cn = cross.norm();
    if (cn < 1e-9) throw DegenerateThrustDirection();
    const Vec3 x_b = cross / cn;
    const Vec3 y_b = z_b.cross(x_b);
    AttitudeSetpoint sp;
    sp.R_d.col(0) = x_b;
    sp.R_d.col(1) = y_b;
    sp.R_d.col(2) = z_b;
    sp.theta_d = std::asin(std::clamp(-sp.R_d(2, 0), -1.0, 1.0));
    sp.phi_d = std::atan2(sp.R_d(2, 1), sp.R_d(2, 2));
    return sp;
}

/// Attitude tracking error z_q = vee(R_d^T R - R^T R_d). Zero iff R = R_d;
/// antisymmetric in its arguments.
inline Vec3 attitude_error(const Mat3& R, const Mat3& R_d) {
    const double defect_r = (R.transpose() * R - Mat3::Identity()).norm();
    const double defect_d = (R_d.transpose() * R_d - Mat3::Identity()).norm();
    if (defect_r > 1e-9 || defect_d > 1e-9)
        throw NonOrthonormalInput("attitude_error expects orthonormal rotation matrices");
    return vee(R_d.transpose() * R - R.transpose() * R_d);
}

/// Exact time derivative of attitude_error given the rotation rates.
inline Vec3 attitude_error_rate(const Mat3& R, const Mat3& Rdot, const Mat3& R_d,
                                const Mat3& R_d_dot) {
    const Mat3 m = R_d_dot.transpose() * R + R_d.transpose() * Rdot -
                   Rdot.transpose() * R_d - R.transpose() * R_d_dot;
    // skew by construction; skip the vee tolerance check
    return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

/// First-order filtered differentiator for reference signals whose analytic
/// derivatives are unavailable (the flatness-derived roll/pitch setpoints).
/// Output lags the raw difference quotient with the given time constant.
class RateFilter {
  public:
    explicit RateFilter(double time_constant) : tc_(time_constant) {}

    Vec3 update(const Vec3& sample, double dt) {
        if (!primed_) {
            prev_ = sample;
            primed_ = true;
            return deriv_;  // zero until a second sample arrives
        }
        const Vec3 raw = (sample - prev_) / dt;
        prev_ = sample;
        const double a = dt / (tc_ + dt);
        deriv_ += a * (raw - deriv_);
        return deriv_;
    }

    const Vec3& value() const { return deriv_; }

    void reset() {
        primed_ = false;
        deriv_.setZero();
    }

  private:
    double tc_;
    bool primed_ = false;
    Vec3 prev_ = Vec3::Zero();
    Vec3 deriv_ = Vec3::Zero();
};

}  // namespace blfctl
