#ifndef PLACER_COLLISION_HPP
#define PLACER_COLLISION_HPP

#include <vector>

#include "placer/kinematics.hpp"

namespace placer {

struct Segment3 {
    Vec3 a;
    Vec3 b;
};

/// Minimum Euclidean distance between two segments (Lumelsky walk:
/// line-line closest points, then clamp each endpoint in turn; parallel
/// lines skip straight to the clamp step).
double segment_min_distance(const Segment3& s1, const Segment3& s2);

struct CollisionResult {
    bool colliding = false;
    double min_clearance = std::numeric_limits<double>::infinity();
};

/// Capsule chain for one configuration: consecutive frame origins, plus the
/// TCP point when a tool pose is supplied.
std::vector<Segment3> capsule_chain(const RobotModel& model, const FrameSet& fs,
                                    const Pose* tcp = nullptr);

/// Checks every non-successive segment pair (j >= i + 2) of the capsule
/// chain. Clearance = pair distance minus the two capsule radii.
CollisionResult self_collision(const RobotModel& model, const Vec6& q,
                               const Pose* tcp = nullptr);
CollisionResult self_collision(const RobotModel& model, const FrameSet& fs,
                               const Pose* tcp = nullptr);

}  // namespace placer

#endif
