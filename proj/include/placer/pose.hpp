#ifndef PLACER_POSE_HPP
#define PLACER_POSE_HPP

#include <Eigen/Dense>

namespace placer {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Rigid transform: rotation + translation, composed by block arithmetic.
struct Pose {
    Vec3 p = Vec3::Zero();
    Mat3 R = Mat3::Identity();

    static Pose identity() { return {}; }

    Pose operator*(const Pose& o) const { return {p + R * o.p, R * o.R}; }
    Vec3 operator*(const Vec3& v) const { return p + R * v; }

    Pose inverse() const { return {-(R.transpose() * p), R.transpose()}; }
};

/// R = Rot(z, psi) * Rot(y, theta) * Rot(x, phi)  (ZYX convention).
Mat3 euler_zyx_to_rotation(double phi, double theta, double psi);

/// Inverse of euler_zyx_to_rotation; returns (phi, theta, psi).
Vec3 rotation_to_euler_zyx(const Mat3& R);

/// Pose from [x, y, z, phi, theta, psi].
Pose pose_from_xyzrpy(const Vec6& v);
Vec6 pose_to_xyzrpy(const Pose& T);

/// Axis-angle extraction, theta in [0, pi]. Degenerate cases:
/// theta ~ 0 returns (0, +z); theta ~ pi extracts the axis from R + I.
void rotation_to_axis_angle(const Mat3& R, double& theta, Vec3& u);

/// Rotation about unit axis u by angle theta.
Mat3 axis_angle_to_rotation(double theta, const Vec3& u);

/// Wrap an angle to (-pi, pi].
double wrap_pi(double a);

/// Project back to the nearest orthonormal matrix (polar via SVD).
Mat3 orthonormalize(const Mat3& R);

}  // namespace placer

#endif
