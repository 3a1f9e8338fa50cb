#ifndef PLACER_IK_HPP
#define PLACER_IK_HPP

#include <optional>
#include <vector>

#include "placer/kinematics.hpp"

namespace placer {

/// Sign branch of the closed-form sub-solves.
struct Branch {
    int eps1 = 1;  // sign used in the q1 quadratic
    int eps2 = 1;  // sign used in the q3 quadratic

    static std::array<Branch, 4> all() {
        return {Branch{-1, -1}, Branch{-1, 1}, Branch{1, -1}, Branch{1, 1}};
    }
    int index() const { return (eps1 > 0 ? 2 : 0) + (eps2 > 0 ? 1 : 0); }
};

struct IkSolution {
    Vec6 q;
    Branch branch;
    double residual = 0.0;
};

struct IkOptions {
    double q4_step = 0.25 * M_PI / 180.0;  // grid pitch over [-pi, pi]
    double residual_tol = 1e-9;            // |G| bound after refinement
    double refine_tol = 1e-12;             // bisection interval width (rad)
    double dedup_tol = 1e-4;               // max-norm merge distance (rad)
};

/// Wrist centre: p - d6 * z axis of the flange.
Vec3 wrist_center(const Pose& pose, double d6);

/// q1 from X S1 + Y C1 = Z with X = -Px, Y = Py, Z = -d5 C4.
/// Empty when the discriminant is negative (branch infeasible at this q4).
std::optional<double> solve_q1(const Vec3& P, double q4, int eps1, double d5);

/// q3 from the squared-sum identity; empty when the branch is infeasible.
std::optional<double> solve_q3(const Vec3& P, double q1, double q4, int eps2,
                               double d1, double a3, double d4, double d5);

/// q2 from the remaining 2x2 linear system in (S2, C2); empty when the
/// system determinant is numerically zero.
std::optional<double> solve_q2(const Vec3& P, double q1, double q3, double q4,
                               double d1, double a3, double d4, double d5);

/// Residual G(q4, branch); empty when any sub-solve fails at this q4.
std::optional<double> residual(const RobotModel& model, const Pose& pose,
                               double q4, Branch branch);

/// All analytical IK solutions of the flange pose (base frame), found by
/// scanning the four residual curves over q4 in [-pi, pi] and bisecting
/// every bracketed sign change. At most 16 solutions, sorted by q4.
std::vector<IkSolution> inverse_kinematics(const RobotModel& model, const Pose& pose,
                                           const IkOptions& opts = {});

/// One sampled point of a residual curve (for CSV export / plotting).
struct ResidualSample {
    double q4;
    std::optional<double> g;
};
std::vector<ResidualSample> residual_curve(const RobotModel& model, const Pose& pose,
                                           Branch branch, double q4_step);

}  // namespace placer

#endif
