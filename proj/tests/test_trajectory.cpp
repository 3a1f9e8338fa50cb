#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "placer/trajectory.hpp"

using namespace placer;

namespace {

Vec6 comfortable_posture() {
    Vec6 q;
    q << 0.0, 0.9, 0.5, 0.4, 0.7, 0.1;
    return q;
}

Trajectory straight_line(const RobotModel& model, const Vec6& q0, const Vec3& delta) {
    const Pose start = forward_kinematics(model, q0).flange();
    Trajectory t;
    t.poses.push_back(start);
    t.poses.push_back({start.p + delta, start.R});
    return t;
}

}  // namespace

TEST_CASE("saddle points lie on both cylinders") {
    SaddleSpec spec;
    spec.R_major = 0.5;
    spec.r_minor = 0.15;
    spec.lead_in = 0.05;
    const auto traj = generate_saddle(spec);
    REQUIRE(traj.poses.size() == static_cast<std::size_t>(spec.samples) + 2);
    CHECK(traj.closed);

    double zmin = 1e9, zmax = -1e9;
    for (std::size_t i = 1; i < traj.poses.size(); ++i) {  // skip the lead-in point
        const Vec3& p = traj.poses[i].p;
        CHECK(std::abs(std::hypot(p.x(), p.y()) - spec.R_major) < 1e-9);
        CHECK(std::abs(p.y() * p.y() + p.z() * p.z() - spec.r_minor * spec.r_minor) < 1e-9);
        zmin = std::min(zmin, p.z());
        zmax = std::max(zmax, p.z());
    }
    // z extent equals the saddle amplitude found by dense intersection sampling
    double amp = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double t = 2.0 * M_PI * k / 100000;
        amp = std::max(amp, std::abs(spec.r_minor * std::cos(t)));
    }
    CHECK(zmax == doctest::Approx(amp).epsilon(1e-6));
    CHECK(zmin == doctest::Approx(-amp).epsilon(1e-6));

    // orientations are orthonormal
    for (const auto& p : traj.poses)
        CHECK((p.R * p.R.transpose() - Mat3::Identity()).norm() < 1e-12);

    // lead-in arrives tangentially with the first cut orientation
    const Vec3 approach = traj.poses[1].p - traj.poses[0].p;
    CHECK(approach.norm() == doctest::Approx(spec.lead_in).epsilon(1e-9));
    CHECK((traj.poses[0].R - traj.poses[1].R).norm() < 1e-12);
}

TEST_CASE("saddle degenerates as the small tube vanishes") {
    SaddleSpec spec;
    spec.R_major = 0.5;
    spec.r_minor = 1e-4;
    spec.lead_in = 0.0;
    const auto traj = generate_saddle(spec);
    for (const auto& p : traj.poses) CHECK(std::abs(p.p.z()) <= 1e-4 + 1e-12);
}

TEST_CASE("saddle spec validation") {
    SaddleSpec bad;
    bad.r_minor = 0.7;
    bad.R_major = 0.5;
    CHECK_THROWS_WITH_AS(generate_saddle(bad),
                         doctest::Contains("r_minor"), std::invalid_argument);
    SaddleSpec few;
    few.samples = 4;
    CHECK_THROWS_WITH_AS(generate_saddle(few),
                         doctest::Contains("samples"), std::invalid_argument);
}

TEST_CASE("camera-in-axis orientation") {
    SaddleSpec spec;
    spec.R_major = 0.5;
    spec.r_minor = 0.15;
    spec.camera_in_axis = true;
    const auto traj = generate_saddle(spec);
    for (const auto& p : traj.poses)
        CHECK((p.R.col(2) - Vec3(-1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("plan_segment") {
    Pose a, b;
    b.p = Vec3(0.01, 0, 0);
    auto plan = plan_segment(a, b, 0.001);
    CHECK(plan.n_steps == 10);
    CHECK(plan.dk.tail<3>().norm() == 0.0);
    CHECK(plan.dk.head<3>().isApprox(Vec3(0.001, 0, 0), 1e-12));

    b.R = euler_zyx_to_rotation(0, 0, M_PI / 2);
    plan = plan_segment(a, b, 0.001);
    CHECK(plan.n_steps == 10);
    CHECK(plan.dk.tail<3>().isApprox(Vec3(0, 0, M_PI / 20), 1e-12));

    CHECK_THROWS_AS(plan_segment(a, a, 0.001), std::invalid_argument);
    CHECK_THROWS_AS(plan_segment(a, b, 0.0), std::invalid_argument);
}

TEST_CASE("plan_segment composition recovers the segment") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 50; ++i) {
        Pose a, b;
        a.p = Vec3(u(rng), u(rng), u(rng));
        a.R = euler_zyx_to_rotation(u(rng), u(rng), u(rng));
        b.p = Vec3(u(rng), u(rng), u(rng));
        b.R = euler_zyx_to_rotation(u(rng), u(rng), u(rng));
        const auto plan = plan_segment(a, b, 0.01);
        Vec3 p = a.p;
        Mat3 R = a.R;
        const Vec3 w = plan.dk.tail<3>();
        for (int k = 0; k < plan.n_steps; ++k) {
            p += plan.dk.head<3>();
            if (w.norm() > 0) R = axis_angle_to_rotation(w.norm(), w.normalized()) * R;
        }
        CHECK((p - b.p).norm() < 1e-9);
        CHECK((R - b.R).norm() < 1e-9);
    }
}

TEST_CASE("simulate a free-space line") {
    const auto model = crx10ia_l();
    const Vec6 q0 = comfortable_posture();
    const auto traj = straight_line(model, q0, Vec3(0.0, 0.0, 0.1));
    SimOptions opts;
    const auto out = simulate(model, traj, q0, opts);
    CHECK(out.completed_fraction == 1.0);
    CHECK(out.failure == FailureCause::none);
    CHECK(out.max_tracking_error < 1e-3);  // open-loop integration drift
    CHECK(out.min_abs_det > opts.det_threshold);
}

TEST_CASE("simulate stops before an unreachable endpoint") {
    const auto model = crx10ia_l();
    const Vec6 q0 = comfortable_posture();
    const auto traj = straight_line(model, q0, Vec3(3.0, 0.0, 0.0));
    const auto out = simulate(model, traj, q0, SimOptions{});
    CHECK(out.completed_fraction < 1.0);
    CHECK((out.failure == FailureCause::singularity || out.failure == FailureCause::joint_limit));
}

TEST_CASE("simulate rejects an out-of-limit start") {
    const auto model = crx10ia_l();
    Vec6 q0 = comfortable_posture();
    const auto traj = straight_line(model, q0, Vec3(0, 0, 0.05));
    q0[1] = model.q_min[1] - 0.1;
    const auto out = simulate(model, traj, q0, SimOptions{});
    CHECK(out.completed_fraction == 0.0);
    CHECK(out.failure == FailureCause::joint_limit);
    CHECK(out.failure_step == 0);
}

TEST_CASE("score quantization by segment count") {
    const auto model = crx10ia_l();
    const Vec6 q0 = comfortable_posture();
    const Pose start = forward_kinematics(model, q0).flange();
    Trajectory traj;
    for (int i = 0; i <= 8; ++i)
        traj.poses.push_back({start.p + Vec3(0.3 * i / 8.0, 0, 0), start.R});
    const auto out = simulate(model, traj, q0, SimOptions{});
    const double frac = out.completed_fraction * 8.0;
    CHECK(std::abs(frac - std::round(frac)) < 1e-12);
}

TEST_CASE("start postures include extended-range representatives") {
    const auto model = crx10ia_l();
    const Pose pose =
        pose_from_xyzrpy((Vec6() << -0.2406, -0.1188, 0.5603, 2.6204, 1.1236, 0.4276).finished());
    const auto sols = inverse_kinematics(model, pose);
    const auto reps = start_postures(model, pose);
    CHECK(reps.size() >= sols.size());
    for (const auto& q : reps) {
        CHECK(q[1] <= model.q_max[1]);
        CHECK(q[2] <= model.q_max[2]);
    }
    // every raw solution appears among the representatives
    for (const auto& s : sols) {
        bool found = false;
        for (const auto& q : reps)
            if ((q - s.q).cwiseAbs().maxCoeff() < 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("evaluate_placement basics") {
    const auto model = crx10ia_l();
    SaddleSpec spec;
    spec.R_major = 0.5;
    spec.r_minor = 0.15;
    spec.samples = 24;
    const auto traj = generate_saddle(spec);
    const Pose tcp = Pose::identity();

    SimOptions opts;
    const Pose far = base_pose_at(Vec2(5.0, 0.0), traj, -0.12);
    CHECK(evaluate_placement(model, traj, far, tcp, opts) == 1.0);
}

TEST_CASE("placement score is frame invariant") {
    const auto model = crx10ia_l();
    const Vec6 q0 = comfortable_posture();
    const auto traj = straight_line(model, q0, Vec3(0.05, 0.05, 0.0));
    const Pose tcp = Pose::identity();
    SimOptions opts;
    opts.ik.q4_step = 1.0 * M_PI / 180.0;

    const Pose base = Pose::identity();
    const double s0 = evaluate_placement(model, traj, base, tcp, opts);

    Pose rig;
    rig.p = Vec3(0.4, -0.2, 0.3);
    rig.R = euler_zyx_to_rotation(0.2, -0.1, 0.7);
    Trajectory moved;
    for (const auto& p : traj.poses) moved.poses.push_back(rig * p);
    const double s1 = evaluate_placement(model, moved, rig * base, tcp, opts);
    CHECK(s0 == doctest::Approx(s1).epsilon(1e-12));
}

TEST_CASE("trajectory json round trip") {
    SaddleSpec spec;
    spec.samples = 16;
    const auto traj = generate_saddle(spec);
    const auto back = trajectory_from_json(trajectory_to_json(traj));
    REQUIRE(back.poses.size() == traj.poses.size());
    CHECK(back.closed == traj.closed);
    for (std::size_t i = 0; i < traj.poses.size(); ++i) {
        CHECK((back.poses[i].p - traj.poses[i].p).norm() < 1e-12);
        CHECK((back.poses[i].R - traj.poses[i].R).norm() < 1e-9);
    }
}
