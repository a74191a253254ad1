#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "blfctl/plants.hpp"
#include "blfctl/sim.hpp"

using namespace blfctl;
using Catch::Approx;

namespace {
const ManipulatorParams kArm;  // the default two-link benchmark
}

TEST_CASE("manipulator inertia is symmetric and well conditioned") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int i = 0; i < 100; ++i) {
        const VecN<2> q(u(rng), u(rng));
        const MatN<2> m = manipulator_inertia(kArm, q);
        CHECK(m(0, 1) == Approx(m(1, 0)).epsilon(1e-15));
        Eigen::SelfAdjointEigenSolver<MatN<2>> es(m);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("gravity and friction cancel exactly at rest") {
    ElState<2> s;
    s.q = VecN<2>(0.0, 0.0);
    s.qdot = VecN<2>::Zero();
    const VecN<2> tau =
        manipulator_gravity(kArm, s.q) + manipulator_friction(kArm, s.qdot);
    const VecN<2> acc = manipulator_accel(s, tau, 0.0, kArm, DisturbanceModel::none());
    CHECK(acc.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Mdot - 2C is skew along trajectories (finite-difference oracle)") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const VecN<2> q(u(rng), u(rng));
        const VecN<2> qdot(u(rng), u(rng));
        // Mdot along the flow q(t): central difference at h = 1e-6
        const double h = 1e-6;
        const MatN<2> mdot = (manipulator_inertia(kArm, VecN<2>(q + h * qdot)) -
                              manipulator_inertia(kArm, VecN<2>(q - h * qdot))) /
                             (2.0 * h);
        const MatN<2> c = manipulator_coriolis(kArm, q, qdot);
        const double residual = qdot.dot((mdot - 2.0 * c) * qdot);
        CHECK(std::abs(residual) < 1e-9 * std::max(1.0, qdot.squaredNorm()));
        // the Christoffel form satisfies full skew-symmetry, not just the quadratic form
        const MatN<2> s = mdot - 2.0 * c;
        CHECK((s + s.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("quadrotor translational dynamics") {
    QuadrotorState s;
    QuadrotorParams p;
    p.m = 2.0;

    SECTION("hover balance") {
        const Vec3 acc = quad_translational_accel(s, Vec3(0, 0, p.m * p.g), 0.0, p,
                                                  DisturbanceModel::none());
        CHECK(acc.norm() < 1e-14);
    }
    SECTION("free fall") {
        const Vec3 acc =
            quad_translational_accel(s, Vec3::Zero(), 0.0, p, DisturbanceModel::none());
        CHECK(acc.isApprox(Vec3(0, 0, -9.81), 1e-14));
    }
    SECTION("direct evaluation") {
        const Vec3 acc = quad_translational_accel(s, Vec3(1, 0, 19.62 + 2), 0.0, p,
                                                  DisturbanceModel::none());
        CHECK(acc.isApprox(Vec3(0.5, 0, 1.0), 1e-12));
    }
}

TEST_CASE("quadrotor rotational dynamics") {
    QuadrotorState s;
    QuadrotorParams p;
    p.J_diag = Vec3(0.02, 0.02, 0.04);

    SECTION("equilibrium") {
        const Vec3 acc =
            quad_rotational_accel(s, Vec3::Zero(), 0.0, p, DisturbanceModel::none());
        CHECK(acc.isZero());
    }
    SECTION("diagonal solve") {
        const Vec3 acc = quad_rotational_accel(s, Vec3(0.02, 0, 0), 0.0, p,
                                               DisturbanceModel::none());
        CHECK(acc.isApprox(Vec3(1, 0, 0), 1e-13));
    }
    SECTION("kinetic energy rate equals qdot . tau (gyroscopic C, no disturbance)") {
        // integrate the rotational subsystem and compare d/dt (1/2 w'Jw) with w'tau
        QuadrotorState st;
        st.w = Vec3(0.3, -0.2, 0.4);
        const Vec3 tau(0.01, 0.02, -0.015);
        const double dt = 1e-3;
        auto deriv = [&](double, const VecN<6>& x) {
            QuadrotorState si;
            si.q = x.head<3>();
            si.w = x.tail<3>();
            VecN<6> dx;
            dx.head<3>() = si.w;
            dx.tail<3>() = quad_rotational_accel(si, tau, 0.0, p, DisturbanceModel::none());
            return dx;
        };
        auto energy = [&](const VecN<6>& x) {
            const Vec3 w = x.tail<3>();
            return 0.5 * w.dot(p.J_diag.cwiseProduct(w));
        };
        VecN<6> x;
        x << st.q, st.w;
        for (int k = 0; k < 100; ++k) {
            const VecN<6> next = rk4_step<6>(0.0, x, dt, deriv);
            const double de_fd = (energy(next) - energy(x)) / dt;
            const Vec3 w_mid = 0.5 * (x.tail<3>() + next.tail<3>());
            CHECK(de_fd == Approx(w_mid.dot(tau)).margin(1e-6));
            x = next;
        }
    }
}

TEST_CASE("realize_thrust") {
    SECTION("aligned case") {
        const auto [u1, force] = realize_thrust(Vec3(0, 0, 19.62), Mat3::Identity());
        CHECK(u1 == Approx(19.62));
        CHECK(force.isApprox(Vec3(0, 0, 19.62), 1e-14));
    }
    SECTION("tilted body") {
        const auto [u1, force] =
            realize_thrust(Vec3(0, 0, 10), rotation_zyx(0, M_PI / 6, 0));
        CHECK(u1 == Approx(10.0));
        CHECK(force.isApprox(Vec3(5.0, 0.0, 10.0 * std::sqrt(3.0) / 2.0), 1e-12));
    }
    SECTION("perfect attitude alignment recovers the command") {
        const Vec3 tau_p(1.5, -2.0, 18.0);
        const auto sp_axis = tau_p.normalized();
        // any rotation whose third column is the thrust direction
        Mat3 r;
        r.col(2) = sp_axis;
        r.col(0) = sp_axis.unitOrthogonal();
        r.col(1) = sp_axis.cross(r.col(0));
        const auto [u1, force] = realize_thrust(tau_p, r);
        CHECK(force.isApprox(tau_p, 1e-12));
    }
    SECTION("zero thrust rejected") {
        CHECK_THROWS_AS(realize_thrust(Vec3::Zero(), Mat3::Identity()), ZeroThrustDirection);
    }
}

TEST_CASE("disturbance evaluation") {
    SECTION("sinusoid") {
        const auto m = DisturbanceModel::sinusoid(Vec3(0.5, 0.5, 0), 0.5);
        CHECK(eval_disturbance(m, 0.0).isZero());
        CHECK(eval_disturbance(m, M_PI)(0) == Approx(0.5 * std::sin(M_PI / 2)));
        CHECK(eval_disturbance(m, M_PI)(1) == Approx(0.5));
    }
    SECTION("wind at 45 degrees has equal x and y components") {
        const auto m = DisturbanceModel::wind(0.5, M_PI / 4, 0.3, Vec3(0.6, 0.6, 0.9),
                                              Vec3::Zero(), 0.3);
        for (double t : {0.0, 1.3, 7.7, 42.0}) {
            const Vec3 d = eval_disturbance(m, t);
            CHECK(d(0) == Approx(d(1)).margin(1e-12));
        }
    }
    SECTION("realization never exceeds the declared bound") {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(0, 2 * M_PI);
        const auto m = DisturbanceModel::wind(0.5, M_PI / 4, 0.3,
                                              Vec3(u(rng), u(rng), u(rng)),
                                              Vec3(u(rng), u(rng), u(rng)), 0.3);
        for (double t = 0.0; t < 200.0; t += 0.37) {
            const Vec3 d = eval_disturbance(m, t);
            for (int i = 0; i < 3; ++i) CHECK(std::abs(d(i)) <= m.bound(i));
        }
    }
}

TEST_CASE("payload events") {
    QuadrotorParams p;
    p.m = 1.4;

    SECTION("pickup then drop restores the original parameters") {
        const PayloadEvent pick{10.0, 0.3, Vec3(0.02, 0, 0)};
        const PayloadEvent drop{20.0, -0.3, Vec3::Zero()};
        const QuadrotorParams picked = apply_payload_event(p, pick);
        CHECK(picked.m == Approx(1.7));
        CHECK(picked.payload_mass == Approx(0.3));
        CHECK(picked.com_offset.isApprox(Vec3(0.02, 0, 0)));
        const QuadrotorParams dropped = apply_payload_event(picked, drop);
        CHECK(dropped.m == Approx(p.m));
        CHECK(dropped.payload_mass == 0.0);
        CHECK(dropped.com_offset.isZero());
    }
    SECTION("drop exceeding current mass is rejected") {
        CHECK_THROWS_AS(apply_payload_event(p, PayloadEvent{0.0, -1.5, Vec3::Zero()}),
                        NonPositiveMass);
    }
}

TEST_CASE("payload COM offset produces the expected torque") {
    QuadrotorParams p;
    p.payload_mass = 0.8;
    p.com_offset = Vec3(0.02, 0, 0);
    // level attitude: weight along -z in body frame, so the arm along x
    // yields pure pitch torque of magnitude r * m * g
    const Vec3 tq = payload_offset_torque(p, Vec3::Zero());
    CHECK(tq(0) == Approx(0.0).margin(1e-15));
    CHECK(tq(1) == Approx(0.02 * 0.8 * 9.81).epsilon(1e-12));
    CHECK(tq(2) == Approx(0.0).margin(1e-15));
}
