#pragma once

#include "blfctl/math.hpp"
#include "blfctl/plants.hpp"
#include "blfctl/reference.hpp"

namespace blfctl {

/// Exact-model handle for the generic Euler-Lagrange tracking controllers:
/// inertia M(q) and the lumped bias H = C qdot + g + f + d. These control
/// laws assume full knowledge of the dynamics.
struct ManipulatorModel {
    ManipulatorParams params;
    DisturbanceModel dist;

    MatN<2> inertia(const VecN<2>& q) const { return manipulator_inertia(params, q); }

    VecN<2> bias(const VecN<2>& q, const VecN<2>& qdot, double t) const {
        return manipulator_coriolis(params, q, qdot) * qdot + manipulator_gravity(params, q) +
               manipulator_friction(params, qdot) + eval_disturbance(dist, t).head<2>();
    }
};

template <int N>
struct ElBlfGains {
    VecN<N> K1 = VecN<N>::Ones();  // diagonal entries
    VecN<N> K2 = VecN<N>::Ones();
};

template <int N>
struct ElBlfConfig {
    ElBlfGains<N> gains;
    VecN<N> k_b = VecN<N>::Constant(0.1);
    VecN<N> k_a = VecN<N>::Constant(0.1);  // lower bounds (asymmetric case)
    bool symmetric = true;
    /// Use k_b in both branches of the asymmetric gain instead of k_a in the
    /// negative branch. Off by default; kept as a switch for comparison.
    bool asym_gain_verbatim = false;
};

/// Barrier Lyapunov value for the generic EL tracking errors:
/// sum of 1/2 log(k^2/(k^2 - z1^2)) over the active branches plus 1/2 z2^T z2.
template <int N>
double el_blf_lyapunov(const VecN<N>& z1, const VecN<N>& z2, const ElBlfConfig<N>& cfg) {
    double v = 0.5 * z2.squaredNorm();
    for (int i = 0; i < N; ++i) {
        const double k = (cfg.symmetric || z1(i) > 0.0) ? cfg.k_b(i) : cfg.k_a(i);
        const double ratio = (z1(i) / k) * (z1(i) / k);
        if (!(ratio < 1.0)) throw ConstraintBoundaryReached("z1", i, z1(i), k);
        // log(k^2/(k^2-z^2)) = -log1p(-z^2/k^2), precise down to tiny z
        v += -0.5 * std::log1p(-ratio);
    }
    return v;
}

template <int N>
struct ElBlfOutput {
    VecN<N> tau = VecN<N>::Zero();
    VecN<N> z1 = VecN<N>::Zero();
    VecN<N> z2 = VecN<N>::Zero();
    VecN<N> alpha = VecN<N>::Zero();
    VecN<N> alphadot = VecN<N>::Zero();
    double V = 0.0;
};

/// Barrier Lyapunov tracking control for an n-DoF Euler-Lagrange system with
/// exact model knowledge. tau = M u + H with
///   alpha  = -D^{-1} K1 z1 + qd_dot
///   u      = alphadot - K2 z2 - D z1
/// and D the (a)symmetric barrier gain. alphadot is computed analytically:
/// per coordinate d/dt[(k^2 - z^2) z] = (k^2 - 3 z^2) zdot with k the bound
/// of the active branch. Numeric differentiation here would inject noise
/// into tau and break the exact-cancellation property.
template <int N, typename Model>
ElBlfOutput<N> el_blf_control(const ElState<N>& s, const ElRef<N>& ref,
                              const ElBlfConfig<N>& cfg, const Model& model, double t) {
    ElBlfOutput<N> out;
    out.z1 = s.q - ref.q;
    const VecN<N> z1dot = s.qdot - ref.qdot;

    if (!cfg.symmetric) {
        for (int i = 0; i < N; ++i) {
            if (out.z1(i) <= -cfg.k_a(i))
                throw ConstraintBoundaryReached("z1", i, out.z1(i), -cfg.k_a(i));
            if (out.z1(i) >= cfg.k_b(i))
                throw ConstraintBoundaryReached("z1", i, out.z1(i), cfg.k_b(i));
        }
    }
    const DiagGain<N> D = (cfg.symmetric || cfg.asym_gain_verbatim)
                              ? barrier_gain<N>(out.z1, cfg.k_b, "z1")
                              : asym_barrier_gain<N>(out.z1, cfg.k_a, cfg.k_b, "z1");

    VecN<N> alphadot;
    for (int i = 0; i < N; ++i) {
        const double beta = 1.0 / D.d(i);  // k^2 - z^2 of the active branch
        const double ksq = beta + out.z1(i) * out.z1(i);
        out.alpha(i) = -cfg.gains.K1(i) * beta * out.z1(i) + ref.qdot(i);
        alphadot(i) = -cfg.gains.K1(i) * (ksq - 3.0 * out.z1(i) * out.z1(i)) * z1dot(i) +
                      ref.qddot(i);
    }
    out.alphadot = alphadot;
    out.z2 = s.qdot - out.alpha;

    const VecN<N> u = alphadot - cfg.gains.K2.cwiseProduct(out.z2) - D * out.z1;
    out.tau = model.inertia(s.q) * u + model.bias(s.q, s.qdot, t);

    out.V = el_blf_lyapunov<N>(out.z1, out.z2, cfg);
    return out;
}

// ---------------------------------------------------------------------------
// PID baseline
// ---------------------------------------------------------------------------

template <int N>
struct PidGains {
    VecN<N> Kp = VecN<N>::Zero();
    VecN<N> Ki = VecN<N>::Zero();
    VecN<N> Kd = VecN<N>::Zero();
    double integral_clamp = 0.5;  // per-axis anti-windup limit
};

/// PID with gravity feedforward, the conventional unconstrained baseline.
/// Carries the integral state, one instance per run.
template <int N>
class PidController {
  public:
    explicit PidController(const PidGains<N>& gains) : gains_(gains) {}

    template <typename Model>
    ElBlfOutput<N> compute(const ElState<N>& s, const ElRef<N>& ref, const Model& model,
                           double dt) {
        ElBlfOutput<N> out;
        out.z1 = s.q - ref.q;
        const VecN<N> z1dot = s.qdot - ref.qdot;
        integral_ += out.z1 * dt;
        integral_ = integral_.cwiseMax(-gains_.integral_clamp).cwiseMin(gains_.integral_clamp);
        out.tau = manipulator_gravity(model.params, s.q) - gains_.Kp.cwiseProduct(out.z1) -
                  gains_.Ki.cwiseProduct(integral_) - gains_.Kd.cwiseProduct(z1dot);
        out.z2 = z1dot;
        return out;
    }

    void reset() { integral_.setZero(); }

  private:
    PidGains<N> gains_;
    VecN<N> integral_ = VecN<N>::Zero();
};

}  // namespace blfctl
