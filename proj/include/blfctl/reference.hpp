#pragma once

#include <algorithm>
#include <vector>

#include "blfctl/math.hpp"

namespace blfctl {

/// Position reference with analytic first and second derivatives.
struct PosRef {
    Vec3 p = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 a = Vec3::Zero();
};

struct YawRef {
    double psi = 0.0;
    double psidot = 0.0;
    double psiddot = 0.0;
};

struct QuadReference {
    PosRef pos;
    YawRef yaw;
};

template <int N>
struct ElRef {
    VecN<N> q = VecN<N>::Zero();
    VecN<N> qdot = VecN<N>::Zero();
    VecN<N> qddot = VecN<N>::Zero();
};

/// Quintic smoothstep: s(0)=0, s(1)=1, zero velocity and acceleration at both
/// ends, so chained segments are globally C^2.
inline double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
inline double smoothstep5_d1(double u) { return u * u * (30.0 + u * (-60.0 + 30.0 * u)); }
inline double smoothstep5_d2(double u) { return u * (60.0 + u * (-180.0 + 120.0 * u)); }

/// Piecewise rest-to-rest quintic path through timed waypoints. Repeating a
/// waypoint position produces a hold segment. Before the first and after the
/// last knot the path holds the end positions.
class QuinticPath {
  public:
    struct Knot {
        double t;
        Vec3 p;
    };

    QuinticPath() = default;
    explicit QuinticPath(std::vector<Knot> knots) : knots_(std::move(knots)) {
        if (knots_.size() < 2) throw ConfigError("QuinticPath needs at least two knots");
        for (size_t i = 1; i < knots_.size(); ++i)
            if (!(knots_[i].t > knots_[i - 1].t))
                throw ConfigError("QuinticPath knot times must strictly increase");
    }

    PosRef eval(double t) const {
        PosRef r;
        if (t <= knots_.front().t) {
            r.p = knots_.front().p;
            return r;
        }
        if (t >= knots_.back().t) {
            r.p = knots_.back().p;
            return r;
        }
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double x, const Knot& k) { return x < k.t; });
        const Knot& b = *it;
        const Knot& a = *(it - 1);
        const double T = b.t - a.t;
        const double u = (t - a.t) / T;
        const Vec3 dp = b.p - a.p;
        r.p = a.p + dp * smoothstep5(u);
        r.v = dp * smoothstep5_d1(u) / T;
        r.a = dp * smoothstep5_d2(u) / (T * T);
        return r;
    }

    double start_time() const { return knots_.front().t; }
    double end_time() const { return knots_.back().t; }
    const std::vector<Knot>& knots() const { return knots_; }

  private:
    std::vector<Knot> knots_;
};

/// Circle in the x-y plane at constant altitude, with the angular speed
/// ramped in by a quintic so the reference starts at rest. After the ramp
/// (duration t_ramp) the phase advances at omega, offset so that
/// theta(t) = omega (t - t_ramp/2).
class CirclePath {
  public:
    CirclePath(double radius, double altitude, double omega, double t_ramp)
        : radius_(radius), altitude_(altitude), omega_(omega), t_ramp_(t_ramp) {}

    PosRef eval(double t) const {
        double th, thd, thdd;
        if (t <= 0.0) {
            th = thd = thdd = 0.0;
        } else if (t < t_ramp_) {
            const double u = t / t_ramp_;
            // theta(t) = omega * t_ramp * int_0^u s(x) dx
            const double iu = u * u * u * u * (2.5 + u * (-3.0 + u));  // int of smoothstep5
            th = omega_ * t_ramp_ * iu;
            thd = omega_ * smoothstep5(u);
            thdd = omega_ * smoothstep5_d1(u) / t_ramp_;
        } else {
            th = omega_ * (t - 0.5 * t_ramp_);
            thd = omega_;
            thdd = 0.0;
        }
        PosRef r;
        const double c = std::cos(th), s = std::sin(th);
        r.p = Vec3(radius_ * c, radius_ * s, altitude_);
        r.v = Vec3(-radius_ * s * thd, radius_ * c * thd, 0.0);
        r.a = Vec3(-radius_ * c * thd * thd - radius_ * s * thdd,
                   -radius_ * s * thd * thd + radius_ * c * thdd, 0.0);
        return r;
    }

    double phase(double t) const {
        if (t <= 0.0) return 0.0;
        if (t < t_ramp_) {
            const double u = t / t_ramp_;
            return omega_ * t_ramp_ * (u * u * u * u * (2.5 + u * (-3.0 + u)));
        }
        return omega_ * (t - 0.5 * t_ramp_);
    }

  private:
    double radius_, altitude_, omega_, t_ramp_;
};

}  // namespace blfctl
