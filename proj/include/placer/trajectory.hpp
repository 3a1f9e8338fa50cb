#ifndef PLACER_TRAJECTORY_HPP
#define PLACER_TRAJECTORY_HPP

#include <string>
#include <vector>

#include "placer/collision.hpp"
#include "placer/ik.hpp"

namespace placer {

/// Ordered world-frame pose list; consecutive poses must differ.
struct Trajectory {
    std::vector<Pose> poses;
    bool closed = false;

    Vec3 centroid() const;
};

/// Saddle cut: intersection curve of a small tube with a larger one.
struct SaddleSpec {
    double R_major = 0.5;        // large tube radius (m), axis = world z
    double r_minor = 0.15;       // small tube radius (m)
    double tilt = M_PI / 2;      // angle between tube axes (pi/2 = perpendicular)
    double bevel = 0.0;          // tool tilt from the surface normal (rad)
    bool camera_in_axis = false; // align tool z with the small-tube axis
    double lead_in = 0.05;       // straight approach length (m)
    int samples = 180;           // points per revolution
};

/// Generates the saddle curve with tool orientations and a tangential
/// lead-in. Throws std::invalid_argument on spec violations.
Trajectory generate_saddle(const SaddleSpec& spec);

enum class FailureCause { none, singularity, joint_limit, self_collision, start_unreachable };
const char* to_string(FailureCause c);

struct SimulationOutcome {
    double completed_fraction = 0.0;  // by segment count
    FailureCause failure = FailureCause::none;
    int failure_step = -1;            // global integration step, -1 = none
    double min_abs_det = std::numeric_limits<double>::infinity();
    double min_limit_margin = std::numeric_limits<double>::infinity();
    double min_clearance = std::numeric_limits<double>::infinity();
    double max_tracking_error = 0.0;  // |FK position - commanded| (m)
};

struct StepPlan {
    int n_steps = 1;
    Vec6 dk = Vec6::Zero();  // [position increment; axis-scaled rotation increment]
};

/// Uniform split of one segment: n = ceil(|dp_vec|/dp), dk_P = dp_vec/n,
/// dk_w = theta*u/n from the relative rotation.
StepPlan plan_segment(const Pose& p_from, const Pose& p_to, double dp);

struct SimOptions {
    double dp = 0.002;
    double det_threshold = 1e-3;
    bool closed_loop = false;    // add K * pose error to dk
    double closed_loop_gain = 0.5;
    IkOptions ik;
    const Pose* tcp = nullptr;   // tool capsule for self-collision checks
};

/// Resolved-rate Euler walk of a base-frame trajectory from one start
/// posture; stops at the first singularity / limit / collision.
SimulationOutcome simulate(const RobotModel& model, const Trajectory& traj_base,
                           const Vec6& q0, const SimOptions& opts);

/// Start-posture candidates for a base-frame trajectory: raw IK solutions of
/// the first pose plus the +2pi representatives of q2/q3 admitted by the
/// extended joint ranges.
std::vector<Vec6> start_postures(const RobotModel& model, const Pose& first_pose,
                                 const IkOptions& opts = {});

/// Score of one base placement: min over feasible start postures of
/// (1 - completed_fraction); 1.0 when no posture survives the entry checks.
double evaluate_placement(const RobotModel& model, const Trajectory& traj_world,
                          const Pose& base, const Pose& tcp, const SimOptions& opts);

/// Base pose for a planar placement: position (x, y, centroid.z + z_offset),
/// yaw facing the trajectory centroid.
Pose base_pose_at(const Vec2& xy, const Trajectory& traj_world, double z_offset);

Trajectory trajectory_from_json(const std::string& json_text);
std::string trajectory_to_json(const Trajectory& traj);
std::string outcome_to_json(const SimulationOutcome& o);

}  // namespace placer

#endif
