#include "placer/kinematics.hpp"

#include <cmath>

namespace placer {

Pose link_transform(const MdhRow& row, double q) {
    const double th = q + row.theta_offset;
    const double ct = std::cos(th), st = std::sin(th);
    const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
    Pose T;
    T.R << ct, -st, 0.0,
           ca * st, ca * ct, -sa,
           sa * st, sa * ct, ca;
    T.p << row.a, -row.d * sa, row.d * ca;
    return T;
}

FrameSet forward_kinematics(const RobotModel& model, const Vec6& q) {
    FrameSet fs;
    fs.frames[0] = Pose::identity();
    for (int i = 0; i < 6; ++i)
        fs.frames[i + 1] = fs.frames[i] * link_transform(model.rows[i], q[i]);
    return fs;
}

Mat6 jacobian(const FrameSet& fs) {
    Mat6 J;
    const Vec3& pn = fs.frames[6].p;
    for (int i = 0; i < 6; ++i) {
        // joint i+1 rotates about the z axis of frame i+1
        const Vec3 z = fs.frames[i + 1].R.col(2);
        const Vec3& pi = fs.frames[i + 1].p;
        J.block<3, 1>(0, i) = z.cross(pn - pi);
        J.block<3, 1>(3, i) = z;
    }
    return J;
}

Mat6 jacobian(const RobotModel& model, const Vec6& q) {
    return jacobian(forward_kinematics(model, q));
}

Pose to_base_frame(const Pose& world_pose, const Pose& base, const Pose& tcp) {
    return base.inverse() * world_pose * tcp.inverse();
}

}  // namespace placer
