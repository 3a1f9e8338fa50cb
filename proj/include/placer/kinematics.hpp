#ifndef PLACER_KINEMATICS_HPP
#define PLACER_KINEMATICS_HPP

#include <array>

#include "placer/pose.hpp"
#include "placer/robot_model.hpp"

namespace placer {

/// Frame poses 0..6 along the chain; frames[0] is the base frame.
struct FrameSet {
    std::array<Pose, 7> frames;
    const Pose& flange() const { return frames[6]; }
};

/// Elementary MDH link transform with theta = q + theta_offset.
Pose link_transform(const MdhRow& row, double q);

/// Chain product of the six link transforms.
FrameSet forward_kinematics(const RobotModel& model, const Vec6& q);

/// Geometric Jacobian mapping joint rates to the base-frame twist [v; w]
/// at the flange origin. Column i = [z_i x (P_6 - P_i); z_i].
Mat6 jacobian(const RobotModel& model, const Vec6& q);
Mat6 jacobian(const FrameSet& fs);

/// World target pose -> flange pose in the robot base frame:
/// base^-1 * world_pose * tcp^-1.
Pose to_base_frame(const Pose& world_pose, const Pose& base, const Pose& tcp);

}  // namespace placer

#endif
