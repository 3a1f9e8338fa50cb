#include "placer/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace placer {

Vec3 Trajectory::centroid() const {
    Vec3 c = Vec3::Zero();
    for (const auto& p : poses) c += p.p;
    return poses.empty() ? c : Vec3(c / poses.size());
}

namespace {

void validate_spec(const SaddleSpec& s) {
    if (!(s.r_minor > 0.0)) throw std::invalid_argument("saddle: r_minor must be > 0");
    if (!(s.r_minor < s.R_major))
        throw std::invalid_argument("saddle: r_minor must be < R_major");
    if (s.samples < 16) throw std::invalid_argument("saddle: samples must be >= 16");
    if (std::abs(std::sin(s.tilt)) < 1e-6)
        throw std::invalid_argument("saddle: tilt must not make the tube axes parallel");
    if (s.lead_in < 0.0) throw std::invalid_argument("saddle: lead_in must be >= 0");
}

}  // namespace

Trajectory generate_saddle(const SaddleSpec& spec) {
    validate_spec(spec);
    const double st = std::sin(spec.tilt), ct = std::cos(spec.tilt);
    const Vec3 axis(st, 0.0, ct);               // small tube axis
    const Vec3 b(0.0, 1.0, 0.0);                // circle basis
    const Vec3 c = axis.cross(b);               // (-ct, 0, st)
    const double R = spec.R_major, r = spec.r_minor;

    auto point_and_tangent = [&](double t, Vec3& p, Vec3& tan) {
        const double cs = std::cos(t), sn = std::sin(t);
        const Vec3 off = r * (cs * c + sn * b);
        const double root = std::sqrt(R * R - off.y() * off.y());
        const double s = (-off.x() + root) / st;  // near side of the large tube
        p = s * axis + off;
        const Vec3 doff = r * (-sn * c + cs * b);
        const double droot = -off.y() * doff.y() / root;
        const double ds = (-doff.x() + droot) / st;
        tan = (ds * axis + doff).normalized();
    };

    auto orientation = [&](const Vec3& p, const Vec3& tan) {
        Vec3 z_tool;
        if (spec.camera_in_axis) {
            z_tool = -axis;
        } else {
            const Vec3 inward = -Vec3(p.x(), p.y(), 0.0).normalized();
            z_tool = axis_angle_to_rotation(spec.bevel, tan) * inward;
        }
        Vec3 x_tool = tan - tan.dot(z_tool) * z_tool;
        if (x_tool.norm() < 1e-9) x_tool = b - b.dot(z_tool) * z_tool;
        x_tool.normalize();
        Mat3 Rm;
        Rm.col(0) = x_tool;
        Rm.col(1) = z_tool.cross(x_tool);
        Rm.col(2) = z_tool;
        return Rm;
    };

    Trajectory traj;
    traj.closed = true;
    std::vector<Pose> curve(spec.samples);
    Vec3 tan0;
    for (int k = 0; k < spec.samples; ++k) {
        const double t = 2.0 * M_PI * k / spec.samples;
        Vec3 p, tan;
        point_and_tangent(t, p, tan);
        curve[k] = {p, orientation(p, tan)};
        if (k == 0) tan0 = tan;
    }
    if (spec.lead_in > 0.0)
        traj.poses.push_back({curve[0].p - spec.lead_in * tan0, curve[0].R});
    traj.poses.insert(traj.poses.end(), curve.begin(), curve.end());
    traj.poses.push_back(curve[0]);  // close the loop
    return traj;
}

const char* to_string(FailureCause c) {
    switch (c) {
        case FailureCause::none: return "none";
        case FailureCause::singularity: return "singularity";
        case FailureCause::joint_limit: return "joint_limit";
        case FailureCause::self_collision: return "self_collision";
        case FailureCause::start_unreachable: return "start_unreachable";
    }
    return "?";
}

StepPlan plan_segment(const Pose& p_from, const Pose& p_to, double dp) {
    if (!(dp > 0.0)) throw std::invalid_argument("plan_segment: dp must be > 0");
    const Vec3 delta = p_to.p - p_from.p;
    double theta;
    Vec3 u;
    rotation_to_axis_angle(p_to.R * p_from.R.transpose(), theta, u);
    if (delta.norm() < 1e-15 && theta < 1e-15)
        throw std::invalid_argument("plan_segment: coincident poses");
    StepPlan plan;
    plan.n_steps = std::max(1, static_cast<int>(std::ceil(delta.norm() / dp)));
    plan.dk.head<3>() = delta / plan.n_steps;
    plan.dk.tail<3>() = theta * u / plan.n_steps;
    return plan;
}

namespace {

double limit_margin(const RobotModel& m, const Vec6& q) {
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i)
        margin = std::min({margin, q[i] - m.q_min[i], m.q_max[i] - q[i]});
    return margin;
}

}  // namespace

SimulationOutcome simulate(const RobotModel& model, const Trajectory& traj_base,
                           const Vec6& q0, const SimOptions& opts) {
    SimulationOutcome out;
    if (traj_base.poses.size() < 2)
        throw std::invalid_argument("simulate: trajectory needs >= 2 poses");
    const int n_seg = static_cast<int>(traj_base.poses.size()) - 1;

    Vec6 q = q0;
    FrameSet fs = forward_kinematics(model, q);
    Mat6 J = jacobian(fs);

    auto check = [&](int step) -> FailureCause {
        const double det = std::abs(J.determinant());
        out.min_abs_det = std::min(out.min_abs_det, det);
        if (det <= opts.det_threshold) return FailureCause::singularity;
        const double margin = limit_margin(model, q);
        out.min_limit_margin = std::min(out.min_limit_margin, margin);
        if (margin <= 0.0) return FailureCause::joint_limit;
        const auto coll = self_collision(model, fs, opts.tcp);
        out.min_clearance = std::min(out.min_clearance, coll.min_clearance);
        if (coll.colliding) return FailureCause::self_collision;
        return FailureCause::none;
    };

    if (auto cause = check(0); cause != FailureCause::none) {
        out.failure = cause;
        out.failure_step = 0;
        return out;
    }

    int completed = 0;
    int global_step = 0;
    Pose cmd = traj_base.poses[0];
    for (int seg = 0; seg < n_seg; ++seg) {
        const StepPlan plan = plan_segment(traj_base.poses[seg], traj_base.poses[seg + 1], opts.dp);
        const Vec3 w = plan.dk.tail<3>();
        const Mat3 dR = w.norm() > 0.0 ? axis_angle_to_rotation(w.norm(), w / w.norm())
                                       : Mat3::Identity();
        for (int k = 0; k < plan.n_steps; ++k) {
            Vec6 dk = plan.dk;
            if (opts.closed_loop) {
                dk.head<3>() += opts.closed_loop_gain * (cmd.p - fs.flange().p);
                double th;
                Vec3 u;
                rotation_to_axis_angle(cmd.R * fs.flange().R.transpose(), th, u);
                dk.tail<3>() += opts.closed_loop_gain * th * u;
            }
            const Vec6 dq = J.partialPivLu().solve(dk);
            ++global_step;
            if (!dq.allFinite()) {
                out.failure = FailureCause::singularity;
                out.failure_step = global_step;
                out.completed_fraction = static_cast<double>(completed) / n_seg;
                return out;
            }
            q += dq;
            cmd.p += plan.dk.head<3>();
            cmd.R = dR * cmd.R;
            fs = forward_kinematics(model, q);
            J = jacobian(fs);
            out.max_tracking_error =
                std::max(out.max_tracking_error, (fs.flange().p - cmd.p).norm());
            if (auto cause = check(global_step); cause != FailureCause::none) {
                out.failure = cause;
                out.failure_step = global_step;
                out.completed_fraction = static_cast<double>(completed) / n_seg;
                return out;
            }
        }
        ++completed;
    }
    out.completed_fraction = 1.0;
    return out;
}

std::vector<Vec6> start_postures(const RobotModel& model, const Pose& first_pose,
                                 const IkOptions& opts) {
    const auto sols = inverse_kinematics(model, first_pose, opts);
    std::vector<Vec6> out;
    for (const auto& s : sols) {
        // extended-range representatives: 2pi lifts that stay inside the
        // limits (q2/q3 upward, q4/q6 in either direction)
        auto lifts = [&](int i, bool down) {
            std::vector<double> c{s.q[i]};
            if (s.q[i] + 2.0 * M_PI <= model.q_max[i]) c.push_back(s.q[i] + 2.0 * M_PI);
            if (down && s.q[i] - 2.0 * M_PI >= model.q_min[i])
                c.push_back(s.q[i] - 2.0 * M_PI);
            return c;
        };
        for (double q2 : lifts(1, false))
            for (double q3 : lifts(2, false))
                for (double q4 : lifts(3, true))
                    for (double q6 : lifts(5, true)) {
                        Vec6 q = s.q;
                        q[1] = q2;
                        q[2] = q3;
                        q[3] = q4;
                        q[5] = q6;
                        out.push_back(q);
                    }
    }
    return out;
}

Pose base_pose_at(const Vec2& xy, const Trajectory& traj_world, double z_offset) {
    const Vec3 c = traj_world.centroid();
    Pose base;
    base.p = Vec3(xy.x(), xy.y(), c.z() + z_offset);
    const double yaw = std::atan2(c.y() - xy.y(), c.x() - xy.x());
    base.R = euler_zyx_to_rotation(0.0, 0.0, yaw);
    return base;
}

double evaluate_placement(const RobotModel& model, const Trajectory& traj_world,
                          const Pose& base, const Pose& tcp, const SimOptions& opts) {
    Trajectory traj_base;
    traj_base.closed = traj_world.closed;
    traj_base.poses.reserve(traj_world.poses.size());
    for (const auto& p : traj_world.poses)
        traj_base.poses.push_back(to_base_frame(p, base, tcp));

    const auto postures = start_postures(model, traj_base.poses[0], opts.ik);
    if (postures.empty()) return 1.0;

    SimOptions sim_opts = opts;
    sim_opts.tcp = &tcp;
    double best = 1.0;
    for (const auto& q0 : postures) {
        const auto outcome = simulate(model, traj_base, q0, sim_opts);
        best = std::min(best, 1.0 - outcome.completed_fraction);
        if (best == 0.0) break;
    }
    return best;
}

Trajectory trajectory_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    Trajectory traj;
    traj.closed = j.value("closed", false);
    for (const auto& e : j.at("poses")) {
        Vec6 v;
        for (int i = 0; i < 3; ++i) v[i] = e.at("p")[i].get<double>();
        for (int i = 0; i < 3; ++i) v[3 + i] = e.at("rpy")[i].get<double>();
        traj.poses.push_back(pose_from_xyzrpy(v));
    }
    if (traj.poses.size() < 2)
        throw std::invalid_argument("trajectory must contain >= 2 poses");
    return traj;
}

std::string trajectory_to_json(const Trajectory& traj) {
    nlohmann::json j;
    j["closed"] = traj.closed;
    j["poses"] = nlohmann::json::array();
    for (const auto& p : traj.poses) {
        const Vec6 v = pose_to_xyzrpy(p);
        j["poses"].push_back({{"p", {v[0], v[1], v[2]}}, {"rpy", {v[3], v[4], v[5]}}});
    }
    return j.dump(2);
}

std::string outcome_to_json(const SimulationOutcome& o) {
    nlohmann::json j;
    j["completed_fraction"] = o.completed_fraction;
    j["failure"] = to_string(o.failure);
    j["failure_step"] = o.failure_step;
    j["min_abs_det"] = o.min_abs_det;
    j["min_limit_margin"] = o.min_limit_margin;
    j["min_clearance"] = o.min_clearance;
    j["max_tracking_error"] = o.max_tracking_error;
    return j.dump(2);
}

}  // namespace placer
