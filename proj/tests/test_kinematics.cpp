#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "placer/kinematics.hpp"

using namespace placer;

namespace {

// independent element-by-element evaluation of the printed link matrix
Eigen::Matrix4d link_oracle(double d, double a, double alpha, double theta) {
    Eigen::Matrix4d T;
    T << std::cos(theta), -std::sin(theta), 0, a,
         std::cos(alpha) * std::sin(theta), std::cos(alpha) * std::cos(theta),
         -std::sin(alpha), -d * std::sin(alpha),
         std::sin(alpha) * std::sin(theta), std::sin(alpha) * std::cos(theta),
         std::cos(alpha), d * std::cos(alpha),
         0, 0, 0, 1;
    return T;
}

Eigen::Matrix4d to_mat4(const Pose& p) {
    Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
    T.topLeftCorner<3, 3>() = p.R;
    T.topRightCorner<3, 1>() = p.p;
    return T;
}

Vec6 random_in_limits(const RobotModel& m, std::mt19937& rng) {
    Vec6 q;
    for (int i = 0; i < 6; ++i) {
        std::uniform_real_distribution<double> d(m.q_min[i], m.q_max[i]);
        q[i] = d(rng);
    }
    return q;
}

// central finite differences, step 1e-6 rad
Mat6 numeric_jacobian(const RobotModel& m, const Vec6& q) {
    const double h = 1e-6;
    Mat6 J;
    for (int i = 0; i < 6; ++i) {
        Vec6 qp = q, qm = q;
        qp[i] += h;
        qm[i] -= h;
        const Pose fp = forward_kinematics(m, qp).flange();
        const Pose fm = forward_kinematics(m, qm).flange();
        J.block<3, 1>(0, i) = (fp.p - fm.p) / (2 * h);
        // small-angle rotation vector from the skew part (well conditioned,
        // unlike the acos-based extraction, at theta ~ 2h)
        const Mat3 dR = fp.R * fm.R.transpose();
        const Vec3 w(dR(2, 1) - dR(1, 2), dR(0, 2) - dR(2, 0), dR(1, 0) - dR(0, 1));
        J.block<3, 1>(3, i) = 0.5 * w / (2 * h);
    }
    return J;
}

const Vec6 kPaperPose = (Vec6() << -0.2406, -0.1188, 0.5603, 2.6204, 1.1236, 0.4276).finished();

const double kTable3[16][6] = {
    {1.108, 2.597, 2.062, -2.896, 2.690, 0.498},
    {0.900, 0.953, 0.858, -2.601, -0.169, -0.334},
    {0.312, 1.050, 0.713, -1.941, -0.679, -1.167},
    {3.129, 0.259, 0.688, -1.546, 2.241, -1.836},
    {-3.050, 2.077, 1.912, -1.436, 0.824, 1.165},
    {-0.393, 2.850, 1.922, -1.186, -1.762, 1.817},
    {-2.230, 0.461, 0.861, -0.526, 2.983, -0.318},
    {-2.226, 2.191, 2.003, -0.521, 0.150, 0.721},
    {-2.035, 0.543, 1.080, 0.248, 2.691, 0.500},
    {-2.240, 2.188, 2.283, 0.538, -0.168, -0.332},
    {-2.827, 2.090, 2.428, 1.198, -0.677, -1.165},
    {-0.013, 2.881, 2.452, 1.593, 2.240, -1.837},
    {0.089, 1.063, 1.229, 1.703, 0.826, 1.165},
    {2.749, 0.290, 1.219, 1.953, -1.764, 1.817},
    {0.909, 2.680, 2.280, 2.613, 2.983, -0.320},
    {0.913, 0.949, 1.138, 2.618, 0.151, 0.722}};

}  // namespace

TEST_CASE("euler zyx basics") {
    CHECK(euler_zyx_to_rotation(0, 0, 0).isApprox(Mat3::Identity(), 1e-15));
    Mat3 expected = Vec3(1, -1, -1).asDiagonal();
    CHECK(euler_zyx_to_rotation(M_PI, 0, 0).isApprox(expected, 1e-12));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ang(-1.4, 1.4);
    for (int i = 0; i < 100; ++i) {
        const double phi = ang(rng), theta = ang(rng), psi = ang(rng);
        const Mat3 R = euler_zyx_to_rotation(phi, theta, psi);
        CHECK((R * R.transpose() - Mat3::Identity()).norm() < 1e-12);
        CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        const Vec3 back = rotation_to_euler_zyx(R);
        CHECK(back[0] == doctest::Approx(phi).epsilon(1e-9));
        CHECK(back[1] == doctest::Approx(theta).epsilon(1e-9));
        CHECK(back[2] == doctest::Approx(psi).epsilon(1e-9));
    }
}

TEST_CASE("axis angle extraction") {
    double theta;
    Vec3 u;
    rotation_to_axis_angle(Mat3::Identity(), theta, u);
    CHECK(theta == 0.0);
    CHECK(u.isApprox(Vec3::UnitZ()));

    rotation_to_axis_angle(euler_zyx_to_rotation(0, 0, M_PI / 2), theta, u);
    CHECK(theta == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(u.isApprox(Vec3::UnitZ(), 1e-12));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int i = 0; i < 200; ++i) {
        Vec3 axis(uni(rng), uni(rng), uni(rng));
        if (axis.norm() < 1e-3) continue;
        axis.normalize();
        const double ang = std::abs(uni(rng)) * M_PI;
        const Mat3 R = axis_angle_to_rotation(ang, axis);
        rotation_to_axis_angle(R, theta, u);
        CHECK((axis_angle_to_rotation(theta, u) - R).norm() < 1e-9);
    }

    // near-pi rotations
    for (int i = 0; i < 50; ++i) {
        Vec3 axis(uni(rng), uni(rng), uni(rng));
        if (axis.norm() < 1e-3) continue;
        axis.normalize();
        const Mat3 R = axis_angle_to_rotation(M_PI - 1e-8, axis);
        rotation_to_axis_angle(R, theta, u);
        CHECK((axis_angle_to_rotation(theta, u) - R).norm() < 1e-6);
    }
}

TEST_CASE("link transform") {
    const auto model = crx10ia_l();
    const Pose T1 = link_transform(model.rows[0], 0.0);
    CHECK(T1.R.isApprox(Mat3::Identity(), 1e-15));
    CHECK(T1.p.isApprox(Vec3(0, 0, 0.245), 1e-15));

    CHECK(to_mat4(link_transform(MdhRow{}, 0.0)).isApprox(Eigen::Matrix4d::Identity()));

    const auto& r2 = model.rows[1];
    CHECK(to_mat4(link_transform(r2, M_PI / 2))
              .isApprox(link_oracle(r2.d, r2.a, r2.alpha, M_PI / 2), 1e-12));
}

TEST_CASE("forward kinematics reproduces the published solutions") {
    const auto model = crx10ia_l();
    for (int row = 0; row < 16; ++row) {
        Vec6 q;
        for (int i = 0; i < 6; ++i) q[i] = kTable3[row][i];
        const Vec6 pose = pose_to_xyzrpy(forward_kinematics(model, q).flange());
        for (int i = 0; i < 3; ++i) CHECK(pose[i] == doctest::Approx(kPaperPose[i]).epsilon(2e-2));
        // the reference joints are printed to 3 decimals; that rounding
        // amplifies to ~1e-2 rad in the recovered Euler angles
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(wrap_pi(pose[3 + i] - kPaperPose[3 + i])) < 1.5e-2);
    }
}

TEST_CASE("forward kinematics equals the chained matrix oracle") {
    const auto model = crx10ia_l();
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec6 q = trial == 0 ? Vec6(Vec6::Zero()) : random_in_limits(model, rng);
        Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
        for (int i = 0; i < 6; ++i) {
            const auto& r = model.rows[i];
            T = T * link_oracle(r.d, r.a, r.alpha, q[i] + r.theta_offset);
        }
        const auto fs = forward_kinematics(model, q);
        CHECK((to_mat4(fs.flange()) - T).norm() < 1e-12);
        CHECK((fs.flange().R * fs.flange().R.transpose() - Mat3::Identity()).norm() < 1e-9);
    }
}

TEST_CASE("jacobian matches finite differences") {
    const auto model = crx10ia_l();
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec6 q = random_in_limits(model, rng);
        const Mat6 J = jacobian(model, q);
        const Mat6 Jn = numeric_jacobian(model, q);
        CHECK((J - Jn).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("jacobian singularity and symmetry") {
    const auto model = crx10ia_l();
    // det J changes sign along q3; bisect the crossing to a true singularity
    Vec6 q;
    q << 0.0, 0.9, 0.5, 0.4, 0.7, 0.1;
    auto det_at = [&](double q3) {
        Vec6 qq = q;
        qq[2] = q3;
        return jacobian(model, qq).determinant();
    };
    double lo = -0.2, hi = 0.0;  // det(lo) > 0 > det(hi)
    REQUIRE(det_at(lo) > 0.0);
    REQUIRE(det_at(hi) < 0.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (det_at(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(std::abs(det_at(0.5 * (lo + hi))) < 1e-10);

    q << 0.0, 0.9, 0.5, 0.4, 0.7, 0.1;
    const double det0 = jacobian(model, q).determinant();
    for (double q1 : {-2.0, -0.5, 1.3}) {
        q[0] = q1;
        CHECK(jacobian(model, q).determinant() == doctest::Approx(det0).epsilon(1e-9));
    }
}

TEST_CASE("to_base_frame") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> uni(-1, 1);
    auto rand_pose = [&] {
        Pose p;
        p.p = Vec3(uni(rng), uni(rng), uni(rng));
        p.R = euler_zyx_to_rotation(uni(rng), uni(rng), uni(rng));
        return p;
    };

    const Pose wp = rand_pose();
    const Pose id = Pose::identity();
    CHECK((to_base_frame(wp, id, id).p - wp.p).norm() < 1e-15);
    CHECK((to_base_frame(wp, wp, id).p).norm() < 1e-12);
    CHECK((to_base_frame(wp, wp, id).R - Mat3::Identity()).norm() < 1e-12);

    for (int i = 0; i < 50; ++i) {
        const Pose world = rand_pose(), base = rand_pose(), tcp = rand_pose();
        const Pose flange = to_base_frame(world, base, tcp);
        const Pose back = base * flange * tcp;
        CHECK((back.p - world.p).norm() < 1e-12);
        CHECK((back.R - world.R).norm() < 1e-12);
    }
}
