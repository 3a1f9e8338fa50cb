#include "placer/pose.hpp"

#include <cmath>

namespace placer {

Mat3 euler_zyx_to_rotation(double phi, double theta, double psi) {
    const double cf = std::cos(phi), sf = std::sin(phi);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(psi), sp = std::sin(psi);
    Mat3 R;
    R << ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp,
         ct * sp, sf * st * sp + cf * cp, cf * st * sp - sf * cp,
         -st,     sf * ct,               cf * ct;
    return R;
}

Vec3 rotation_to_euler_zyx(const Mat3& R) {
    const double st = -R(2, 0);
    const double ct = std::hypot(R(0, 0), R(1, 0));
    const double theta = std::atan2(st, ct);
    double phi, psi;
    if (ct > 1e-10) {
        phi = std::atan2(R(2, 1), R(2, 2));
        psi = std::atan2(R(1, 0), R(0, 0));
    } else {
        // gimbal lock: fold everything into phi; the sign of the coupled
        // term flips with the sign of theta
        phi = st > 0 ? std::atan2(R(0, 1), R(1, 1)) : std::atan2(-R(0, 1), R(1, 1));
        psi = 0.0;
    }
    return {phi, theta, psi};
}

Pose pose_from_xyzrpy(const Vec6& v) {
    return {v.head<3>(), euler_zyx_to_rotation(v[3], v[4], v[5])};
}

Vec6 pose_to_xyzrpy(const Pose& T) {
    Vec6 v;
    v.head<3>() = T.p;
    v.tail<3>() = rotation_to_euler_zyx(T.R);
    return v;
}

void rotation_to_axis_angle(const Mat3& R, double& theta, Vec3& u) {
    double c = (R.trace() - 1.0) / 2.0;
    c = std::clamp(c, -1.0, 1.0);
    theta = std::acos(c);
    const double s = std::sin(theta);
    if (theta < 1e-9) {
        theta = 0.0;
        u = Vec3::UnitZ();
        return;
    }
    if (std::abs(M_PI - theta) < 1e-6) {
        // near pi: sin(theta) vanishes, take the axis from (R + I)/2
        Mat3 B = (R + Mat3::Identity()) / 2.0;
        int k;
        B.diagonal().maxCoeff(&k);
        u = B.col(k) / std::sqrt(B(k, k));
        u.normalize();
        // sign from the largest skew component (zero at exactly pi, any sign valid)
        Vec3 skew(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
        int m;
        skew.cwiseAbs().maxCoeff(&m);
        if (skew.cwiseAbs()[m] > 1e-12 && skew[m] * u[m] < 0.0) u = -u;
        return;
    }
    u = Vec3(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)) / (2.0 * s);
    u.normalize();
}

Mat3 axis_angle_to_rotation(double theta, const Vec3& u) {
    return Eigen::AngleAxisd(theta, u.normalized()).toRotationMatrix();
}

double wrap_pi(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a <= 0.0) a += 2.0 * M_PI;
    return a - M_PI;
}

Mat3 orthonormalize(const Mat3& R) {
    Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 Q = svd.matrixU() * svd.matrixV().transpose();
    if (Q.determinant() < 0.0) {
        Mat3 D = Mat3::Identity();
        D(2, 2) = -1.0;
        Q = svd.matrixU() * D * svd.matrixV().transpose();
    }
    return Q;
}

}  // namespace placer
