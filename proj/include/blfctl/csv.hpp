#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "blfctl/metrics.hpp"
#include "blfctl/sim.hpp"

namespace blfctl {

namespace detail {

/// 17 significant digits: doubles round-trip bit-exactly through the text.
inline void append_num(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

inline void append_vec(std::string& out, const Vec3& v, int n = 3) {
    for (int i = 0; i < n; ++i) {
        out += ',';
        append_num(out, v(i));
    }
}

}  // namespace detail

inline std::string quad_csv_header() {
    return "t,x,y,z,vx,vy,vz,phi,theta,psi,wx,wy,wz,"
           "xd,yd,zd,vxd,vyd,vzd,phid,thetad,psid,wxd,wyd,wzd,"
           "z_p1,z_p2,z_p3,z_2p1,z_2p2,z_2p3,z_q1,z_q2,z_q3,z_2q1,z_2q2,z_2q3,"
           "zdot_p1,zdot_p2,zdot_p3,zdot_q1,zdot_q2,zdot_q3,"
           "tau_p1,tau_p2,tau_p3,u1,tau_q1,tau_q2,tau_q3,rho_p,rho_q,V,"
           "dist_p1,dist_p2,dist_p3,dist_q1,dist_q2,dist_q3,eta_p,eta_q,mass,violation";
}

inline std::string manipulator_csv_header() {
    return "t,q1,q2,qdot1,qdot2,qd1,qd2,qddot_d1,qddot_d2,"
           "z1_1,z1_2,z2_1,z2_2,tau1,tau2,V,d1,d2,violation";
}

/// Serialize a run log; schema is fixed per plant family and documented in
/// the README. One record per control step.
inline std::string to_csv(const SimLog& log) {
    std::string out;
    out.reserve(log.records.size() * 64 * (log.dof == 2 ? 20 : 64));
    if (log.dof == 2) {
        out += manipulator_csv_header();
        out += '\n';
        for (const auto& r : log.records) {
            detail::append_num(out, r.t);
            detail::append_vec(out, r.p, 2);
            detail::append_vec(out, r.v, 2);
            detail::append_vec(out, r.p_d, 2);
            detail::append_vec(out, r.pdot_d, 2);
            detail::append_vec(out, r.z_p, 2);
            detail::append_vec(out, r.z_2p, 2);
            detail::append_vec(out, r.tau_p, 2);
            out += ',';
            detail::append_num(out, r.V);
            detail::append_vec(out, r.dist_p, 2);
            out += ',';
            out += r.violation ? '1' : '0';
            out += '\n';
        }
        return out;
    }
    out += quad_csv_header();
    out += '\n';
    for (const auto& r : log.records) {
        detail::append_num(out, r.t);
        detail::append_vec(out, r.p);
        detail::append_vec(out, r.v);
        detail::append_vec(out, r.q);
        detail::append_vec(out, r.w);
        detail::append_vec(out, r.p_d);
        detail::append_vec(out, r.pdot_d);
        detail::append_vec(out, r.q_d);
        detail::append_vec(out, r.qdot_d);
        detail::append_vec(out, r.z_p);
        detail::append_vec(out, r.z_2p);
        detail::append_vec(out, r.z_q);
        detail::append_vec(out, r.z_2q);
        detail::append_vec(out, r.zdot_p);
        detail::append_vec(out, r.zdot_q);
        detail::append_vec(out, r.tau_p);
        out += ',';
        detail::append_num(out, r.u1);
        detail::append_vec(out, r.tau_q);
        out += ',';
        detail::append_num(out, r.rho_p);
        out += ',';
        detail::append_num(out, r.rho_q);
        out += ',';
        detail::append_num(out, r.V);
        detail::append_vec(out, r.dist_p);
        detail::append_vec(out, r.dist_q);
        out += ',';
        detail::append_num(out, r.eta_p_norm);
        out += ',';
        detail::append_num(out, r.eta_q_norm);
        out += ',';
        detail::append_num(out, r.mass);
        out += ',';
        out += r.violation ? '1' : '0';
        out += '\n';
    }
    return out;
}

/// Write a file atomically: stage into a sibling temp file, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace blfctl
