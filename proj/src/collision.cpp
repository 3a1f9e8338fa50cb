#include "placer/collision.hpp"

#include <algorithm>
#include <cmath>

namespace placer {

double segment_min_distance(const Segment3& s1, const Segment3& s2) {
    const Vec3 d1 = s1.b - s1.a;
    const Vec3 d2 = s2.b - s2.a;
    const Vec3 r = s1.a - s2.a;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);

    double s = 0.0, t = 0.0;
    constexpr double eps = 1e-14;
    if (a <= eps && e <= eps) {
        // two points
    } else if (a <= eps) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= eps) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            // parallel lines: keep s at an end of the first segment
            s = denom > eps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((s1.a + s * d1) - (s2.a + t * d2)).norm();
}

std::vector<Segment3> capsule_chain(const RobotModel& model, const FrameSet& fs,
                                    const Pose* tcp) {
    std::vector<Vec3> pts;
    pts.reserve(8);
    for (const auto& f : fs.frames) pts.push_back(f.p);
    if (tcp) pts.push_back((fs.flange() * *tcp).p);
    std::vector<Segment3> segs;
    segs.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back({pts[i], pts[i + 1]});
    return segs;
}

CollisionResult self_collision(const RobotModel& model, const FrameSet& fs,
                               const Pose* tcp) {
    const auto segs = capsule_chain(model, fs, tcp);
    const std::size_t n = segs.size();
    std::vector<double> len(n);
    for (std::size_t i = 0; i < n; ++i) len[i] = (segs[i].b - segs[i].a).norm();
    CollisionResult res;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        if (len[i] < 1e-6) continue;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (len[j] < 1e-6) continue;
            // segments separated only by zero-length links share a joint
            // point and count as adjacent
            bool adjacent = true;
            for (std::size_t k = i + 1; k < j && adjacent; ++k)
                if (len[k] >= 1e-6) adjacent = false;
            if (adjacent) continue;
            const double ri = model.capsule_radii[std::min(i, model.capsule_radii.size() - 1)];
            const double rj = model.capsule_radii[std::min(j, model.capsule_radii.size() - 1)];
            const double clearance = segment_min_distance(segs[i], segs[j]) - ri - rj;
            res.min_clearance = std::min(res.min_clearance, clearance);
            if (clearance <= 0.0) res.colliding = true;
        }
    }
    return res;
}

CollisionResult self_collision(const RobotModel& model, const Vec6& q, const Pose* tcp) {
    return self_collision(model, forward_kinematics(model, q), tcp);
}

}  // namespace placer
