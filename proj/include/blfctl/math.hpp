#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "blfctl/errors.hpp"

namespace blfctl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
template <int N>
using VecN = Eigen::Matrix<double, N, 1>;
template <int N>
using MatN = Eigen::Matrix<double, N, N>;

template <typename Derived>
inline void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (!m.allFinite()) throw NumericFailure(std::string("non-finite value in ") + what);
}

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericFailure(std::string("non-finite value in ") + what);
}

/// Z-Y-X Euler angle rotation matrix (body to world): R = Rz(psi) Ry(theta) Rx(phi).
inline Mat3 rotation_zyx(double phi, double theta, double psi) {
    require_finite(phi, "rotation_zyx/phi");
    require_finite(theta, "rotation_zyx/theta");
    require_finite(psi, "rotation_zyx/psi");
    const double cf = std::cos(phi), sf = std::sin(phi);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(psi), sp = std::sin(psi);
    Mat3 r;
    r << cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf,
         sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf,
         -st,     sf * ct,                cf * ct;
    return r;
}

inline Mat3 rotation_zyx(const Vec3& q) { return rotation_zyx(q(0), q(1), q(2)); }

/// Time derivative of rotation_zyx(q(t)) for Euler-rate qdot.
inline Mat3 rotation_zyx_rate(const Vec3& q, const Vec3& qdot) {
    const double cf = std::cos(q(0)), sf = std::sin(q(0));
    const double ct = std::cos(q(1)), st = std::sin(q(1));
    const double cp = std::cos(q(2)), sp = std::sin(q(2));
    Mat3 rx, ry, rz, drx, dry, drz;
    rx << 1, 0, 0, 0, cf, -sf, 0, sf, cf;
    ry << ct, 0, st, 0, 1, 0, -st, 0, ct;
    rz << cp, -sp, 0, sp, cp, 0, 0, 0, 1;
    drx << 0, 0, 0, 0, -sf, -cf, 0, cf, -sf;
    dry << -st, 0, ct, 0, 0, 0, -ct, 0, -st;
    drz << -sp, -cp, 0, cp, -sp, 0, 0, 0, 0;
    return drz * ry * rx * qdot(2) + rz * dry * rx * qdot(1) + rz * ry * drx * qdot(0);
}

inline Mat3 skew(const Vec3& v) {
    require_finite(v, "skew");
    Mat3 m;
    m <<      0, -v(2),  v(1),
           v(2),     0, -v(0),
          -v(1),  v(0),     0;
    return m;
}

/// Inverse of skew: extracts the axial vector of a skew-symmetric matrix.
/// Tolerance 1e-9 on ||M + M^T||: rotation products in double precision stay
/// near 1e-13, so this margin flags genuine shape errors without false alarms.
inline Vec3 vee(const Mat3& m) {
    require_finite(m, "vee");
    const double defect = (m + m.transpose()).norm();
    if (defect > 1e-9) throw NotSkewSymmetric(defect);
    return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

/// Vector saturation: x/||x|| outside the layer of radius k, x/k inside.
/// Continuous at ||x|| = k, output norm always <= 1.
template <typename Derived>
inline auto sat(const Eigen::MatrixBase<Derived>& x, double k)
    -> Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, 1> {
    require_finite(x, "sat");
    if (!(k > 0.0)) throw Error("sat: layer width must be positive");
    const double n = x.norm();
    if (n >= k) return x / n;
    return x / k;
}

/// Diagonal positive gain matrix with N entries.
template <int N>
struct DiagGain {
    VecN<N> d;

    DiagGain() : d(VecN<N>::Zero()) {}
    explicit DiagGain(const VecN<N>& entries) : d(entries) {
        for (int i = 0; i < N; ++i)
            if (!(d(i) > 0.0)) throw Error("DiagGain: entries must be strictly positive");
    }

    VecN<N> operator*(const VecN<N>& v) const { return d.cwiseProduct(v); }
    DiagGain inverse() const { return DiagGain(d.cwiseInverse()); }
    MatN<N> matrix() const { return d.asDiagonal(); }
    double max() const { return d.maxCoeff(); }
};

using DiagGain3 = DiagGain<3>;

/// Barrier gain diag{ 1/(k_i^2 - z_i^2) } for symmetric bounds |z_i| < k_i.
/// Entries grow without bound as |z_i| -> k_i. Throws when any channel is at
/// or past its bound: the controller is infeasible there.
template <int N>
inline DiagGain<N> barrier_gain(const VecN<N>& z, const VecN<N>& k, const char* channel = "z") {
    require_finite(z, "barrier_gain");
    VecN<N> d;
    for (int i = 0; i < N; ++i) {
        if (std::abs(z(i)) >= k(i)) throw ConstraintBoundaryReached(channel, i, z(i), k(i));
        d(i) = 1.0 / (k(i) * k(i) - z(i) * z(i));
    }
    return DiagGain<N>(d);
}

/// Asymmetric barrier gain for -k_a_i < z_i < k_b_i with branch switch
/// r_i = 1 if z_i > 0 else 0; entry r/(k_b^2 - z^2) + (1-r)/(k_a^2 - z^2).
template <int N>
inline DiagGain<N> asym_barrier_gain(const VecN<N>& z, const VecN<N>& k_a, const VecN<N>& k_b,
                                     const char* channel = "z") {
    require_finite(z, "asym_barrier_gain");
    VecN<N> d;
    for (int i = 0; i < N; ++i) {
        if (z(i) <= -k_a(i)) throw ConstraintBoundaryReached(channel, i, z(i), -k_a(i));
        if (z(i) >= k_b(i)) throw ConstraintBoundaryReached(channel, i, z(i), k_b(i));
        const double k = z(i) > 0.0 ? k_b(i) : k_a(i);
        d(i) = 1.0 / (k * k - z(i) * z(i));
    }
    return DiagGain<N>(d);
}

}  // namespace blfctl
