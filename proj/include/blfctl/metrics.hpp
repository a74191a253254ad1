#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "blfctl/plants.hpp"
#include "blfctl/sim.hpp"

namespace blfctl {

struct AxisStats {
    double rms = 0.0;
    double peak = 0.0;
};

/// Per-axis tracking statistics over a full run. Attitude blocks are reported
/// in degrees; manipulator runs use the position block for the joint errors
/// (radians) and leave the rest zero.
struct MetricsReport {
    int dof = 3;
    TerminalStatus status = TerminalStatus::completed;
    int violation_count = 0;
    std::array<AxisStats, 3> position;  // m (rad for joints)
    std::array<AxisStats, 3> attitude;  // deg
    std::array<AxisStats, 3> velocity;  // m/s
    std::array<AxisStats, 3> rate;      // deg/s
    std::vector<double> drop_errors;    // ||z_p|| at each payload drop
};

namespace detail {

inline void accumulate(std::array<AxisStats, 3>& stats, const std::vector<SimRecord>& recs,
                       Vec3 SimRecord::* field, double scale) {
    if (recs.empty()) return;
    Vec3 sumsq = Vec3::Zero();
    Vec3 peak = Vec3::Zero();
    for (const auto& r : recs) {
        const Vec3 v = (r.*field) * scale;
        sumsq += v.cwiseProduct(v);
        peak = peak.cwiseMax(v.cwiseAbs());
    }
    for (int i = 0; i < 3; ++i) {
        stats[i].rms = std::sqrt(sumsq(i) / static_cast<double>(recs.size()));
        stats[i].peak = peak(i);
    }
}

}  // namespace detail

inline MetricsReport compute_metrics(const SimLog& log) {
    MetricsReport m;
    m.dof = log.dof;
    m.status = log.status;
    m.violation_count = log.violation_count();
    constexpr double rad2deg = 180.0 / M_PI;
    detail::accumulate(m.position, log.records, &SimRecord::z_p, 1.0);
    detail::accumulate(m.attitude, log.records, &SimRecord::z_q, rad2deg);
    detail::accumulate(m.velocity, log.records, &SimRecord::zdot_p, 1.0);
    detail::accumulate(m.rate, log.records, &SimRecord::zdot_q, rad2deg);
    return m;
}

/// Variant that also evaluates the delivery accuracy: the position-error norm
/// at the instant of each drop event.
inline MetricsReport compute_metrics(const SimLog& log, const std::vector<PayloadEvent>& events) {
    MetricsReport m = compute_metrics(log);
    for (const auto& ev : events) {
        if (ev.delta_mass >= 0.0) continue;
        double best = std::numeric_limits<double>::infinity();
        double err = 0.0;
        for (const auto& r : log.records) {
            const double d = std::abs(r.t - ev.time);
            if (d < best) {
                best = d;
                err = r.z_p.norm();
            }
        }
        if (std::isfinite(best)) m.drop_errors.push_back(err);
    }
    return m;
}

}  // namespace blfctl
