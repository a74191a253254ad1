#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "blfctl/math.hpp"

using namespace blfctl;
using Catch::Approx;

TEST_CASE("rotation_zyx basic cases") {
    CHECK(rotation_zyx(0, 0, 0).isApprox(Mat3::Identity(), 1e-15));

    // quarter turn about z
    Mat3 expected;
    expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    CHECK(rotation_zyx(0, 0, M_PI / 2).isApprox(expected, 1e-12));
}

TEST_CASE("rotation_zyx is orthonormal with unit determinant") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    double worst_orth = 0.0, worst_det = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Mat3 r = rotation_zyx(angle(rng), angle(rng), angle(rng));
        worst_orth = std::max(worst_orth,
                              (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff());
        worst_det = std::max(worst_det, std::abs(r.determinant() - 1.0));
    }
    CHECK(worst_orth < 1e-12);
    CHECK(worst_det < 1e-12);
}

TEST_CASE("rotation_zyx_rate matches finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-1.2, 1.2);
    for (int i = 0; i < 50; ++i) {
        const Vec3 q(angle(rng), angle(rng), angle(rng));
        const Vec3 qdot(angle(rng), angle(rng), angle(rng));
        const double h = 1e-6;
        const Mat3 fd = (rotation_zyx(Vec3(q + h * qdot)) - rotation_zyx(Vec3(q - h * qdot))) /
                        (2.0 * h);
        CHECK((rotation_zyx_rate(q, qdot) - fd).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("skew basics and vee round trip") {
    CHECK(skew(Vec3::Zero()).isZero());

    Mat3 e1;
    e1 << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    CHECK(skew(Vec3(1, 0, 0)).isApprox(e1, 1e-15));

    CHECK(vee(Mat3::Zero()).isZero());
    CHECK(vee(skew(Vec3(1, 2, 3))) == Vec3(1, 2, 3));
    CHECK(vee(skew(Vec3(-0.5, 0.25, 0))) == Vec3(-0.5, 0.25, 0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 v(u(rng), u(rng), u(rng));
        CHECK(vee(skew(v)) == v);  // exact
        CHECK((skew(v) + skew(v).transpose()).isZero());
    }
}

TEST_CASE("vee rejects non-skew input") {
    Mat3 m = Mat3::Identity();
    CHECK_THROWS_AS(vee(m), NotSkewSymmetric);
}

TEST_CASE("sat branches and continuity") {
    CHECK(sat(Vec3(3, 4, 0), 1.0).isApprox(Vec3(0.6, 0.8, 0.0), 1e-15));
    CHECK(sat(Vec3(0.3, 0, 0), 2.0).isApprox(Vec3(0.15, 0, 0), 1e-15));
    CHECK(sat(Vec3::Zero(), 0.5).isZero());

    // both branches agree at the layer edge
    const double k = 0.7;
    Vec3 x = Vec3(1, -2, 0.5).normalized() * k;
    const Vec3 lo = sat(Vec3(x * (1.0 - 1e-12)), k);
    const Vec3 hi = sat(Vec3(x * (1.0 + 1e-12)), k);
    CHECK((hi - lo).norm() < 1e-9);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 200; ++i) {
        const Vec3 v(u(rng), u(rng), u(rng));
        CHECK(sat(v, 0.3).norm() <= 1.0 + 1e-15);
    }
}

TEST_CASE("barrier_gain frozen values") {
    // at zero error the entries are 1/k^2
    const auto d0 = barrier_gain<3>(Vec3(0, 0, 0), Vec3(0.3, 0.3, 0.16));
    CHECK(d0.d(0) == Approx(11.111111111111111).epsilon(1e-12));
    CHECK(d0.d(1) == Approx(11.111111111111111).epsilon(1e-12));
    CHECK(d0.d(2) == Approx(39.0625).epsilon(1e-12));

    const auto d1 = barrier_gain<1>(VecN<1>::Constant(0.15), VecN<1>::Constant(0.3));
    CHECK(d1.d(0) == Approx(14.814814814814815).epsilon(1e-12));  // 1/(0.09-0.0225)
}

TEST_CASE("barrier_gain grows monotonically toward the pole") {
    const VecN<1> k = VecN<1>::Constant(0.3);
    double prev = 0.0;
    for (double z = 0.0; z < 0.3; z += 0.0123) {
        const double g = barrier_gain<1>(VecN<1>::Constant(z), k).d(0);
        CHECK(g > prev);
        prev = g;
    }
    CHECK(barrier_gain<1>(VecN<1>::Constant(0.299999), k).d(0) > 1e5);
    CHECK_THROWS_AS(barrier_gain<1>(VecN<1>::Constant(0.3), k), ConstraintBoundaryReached);
    CHECK_THROWS_AS(barrier_gain<1>(VecN<1>::Constant(-0.31), k), ConstraintBoundaryReached);
}

TEST_CASE("asym_barrier_gain frozen values and branch switch") {
    const VecN<1> ka = VecN<1>::Constant(0.06);
    const VecN<1> kb = VecN<1>::Constant(0.1);
    CHECK(asym_barrier_gain<1>(VecN<1>::Zero(), ka, kb).d(0) ==
          Approx(277.77777777777777).epsilon(1e-12));  // z = 0 takes the lower branch
    CHECK(asym_barrier_gain<1>(VecN<1>::Constant(0.05), ka, kb).d(0) ==
          Approx(133.33333333333333).epsilon(1e-12));
    CHECK(asym_barrier_gain<1>(VecN<1>::Constant(-0.05), ka, kb).d(0) ==
          Approx(909.0909090909090).epsilon(1e-12));
    CHECK_THROWS_AS(asym_barrier_gain<1>(VecN<1>::Constant(-0.06), ka, kb),
                    ConstraintBoundaryReached);
    CHECK_THROWS_AS(asym_barrier_gain<1>(VecN<1>::Constant(0.1), ka, kb),
                    ConstraintBoundaryReached);
}

TEST_CASE("asym_barrier_gain reduces to barrier_gain when k_a = k_b") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.29, 0.29);
    const Vec3 k = Vec3::Constant(0.3);
    for (int i = 0; i < 100; ++i) {
        Vec3 z(u(rng), u(rng), u(rng));
        for (int j = 0; j < 3; ++j)
            if (z(j) == 0.0) z(j) = 0.01;
        const auto a = asym_barrier_gain<3>(z, k, k);
        const auto b = barrier_gain<3>(z, k);
        CHECK((a.d - b.d).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("doubling the bounds strictly decreases every barrier gain entry") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.12, 0.12);
    const Vec3 k(0.3, 0.3, 0.16);
    for (int i = 0; i < 100; ++i) {
        const Vec3 z(u(rng), u(rng), u(rng));
        const auto g1 = barrier_gain<3>(z, k);
        const auto g2 = barrier_gain<3>(z, Vec3(2 * k));
        for (int j = 0; j < 3; ++j) CHECK(g2.d(j) < g1.d(j));
    }
}

TEST_CASE("DiagGain rejects non-positive entries") {
    CHECK_THROWS_AS(DiagGain3(Vec3(1.0, 0.0, 2.0)), Error);
    CHECK_THROWS_AS(DiagGain3(Vec3(1.0, -0.1, 2.0)), Error);
    const DiagGain3 g(Vec3(2, 4, 8));
    CHECK(g.inverse().d.isApprox(Vec3(0.5, 0.25, 0.125)));
    CHECK((g * Vec3(1, 1, 1)).isApprox(Vec3(2, 4, 8)));
}
